import type { Client } from './api.js'
import type { ResultsBody, WhatIfOverrides } from './types.js'
import { splitError, weightVectorError } from './validate.js'

export interface SessionView {
  status: 'loading' | 'ready' | 'error'
  results: ResultsBody | null
  error: string | null
  validationError: string | null
  pending: boolean
}

type Listener = (view: SessionView) => void

/**
 * Holds the override state and the latest acknowledged evaluation.
 *
 * Every number shown in the UI comes from a service response stored here;
 * nothing is aggregated locally. Edits are debounced, and a response is
 * applied only if no newer request has been issued since (latest wins), so
 * the displayed chart always corresponds to the last acknowledged request.
 */
export class WhatIfSession {
  private overrides: WhatIfOverrides = {}
  private results: ResultsBody | null = null
  private error: string | null = null
  private validationError: string | null = null
  private status: SessionView['status'] = 'loading'
  private pending = 0
  private sequence = 0
  private applied = 0
  private timer: ReturnType<typeof setTimeout> | null = null
  private listeners: Listener[] = []

  constructor(
    private readonly client: Client,
    private readonly debounceMs = 150,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener)
    listener(this.view())
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener)
    }
  }

  view(): SessionView {
    return {
      status: this.status,
      results: this.results,
      error: this.error,
      validationError: this.validationError,
      pending: this.pending > 0 || this.timer !== null,
    }
  }

  currentOverrides(): WhatIfOverrides {
    return JSON.parse(JSON.stringify(this.overrides)) as WhatIfOverrides
  }

  async initialize(): Promise<void> {
    this.status = 'loading'
    this.notify()
    try {
      this.results = await this.client.getBaseline()
      this.status = 'ready'
      this.error = null
    } catch (err) {
      this.status = 'error'
      this.error = err instanceof Error ? err.message : String(err)
    }
    this.notify()
  }

  setInterviewWeight(value: number): void {
    const problem = splitError(value)
    if (problem) {
      this.validationError = problem
      this.notify()
      return
    }
    this.validationError = null
    this.overrides = { ...this.overrides, interview_weight: value }
    this.schedule()
  }

  setSiblingWeights(parent: string, weights: Record<string, number>): void {
    const problem = weightVectorError(weights)
    if (problem) {
      this.validationError = `${parent}: ${problem}`
      this.notify()
      return
    }
    this.validationError = null
    this.overrides = {
      ...this.overrides,
      sibling_weights: { ...(this.overrides.sibling_weights ?? {}), [parent]: weights },
    }
    this.schedule()
  }

  setUtilities(scale: string, utilities: number[]): void {
    for (let i = 1; i < utilities.length; i += 1) {
      if (!(utilities[i] > utilities[i - 1])) {
        this.validationError = `${scale}: utilities must be strictly increasing`
        this.notify()
        return
      }
    }
    this.validationError = null
    this.overrides = {
      ...this.overrides,
      utilities: { ...(this.overrides.utilities ?? {}), [scale]: utilities },
    }
    this.schedule()
  }

  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer)
      this.timer = null
      void this.issue()
    }
  }

  private schedule(): void {
    if (this.timer !== null) clearTimeout(this.timer)
    this.timer = setTimeout(() => {
      this.timer = null
      void this.issue()
    }, this.debounceMs)
    this.notify()
  }

  private async issue(): Promise<void> {
    this.sequence += 1
    const mine = this.sequence
    this.pending += 1
    this.notify()
    try {
      const results = await this.client.whatIf(this.currentOverrides())
      if (mine > this.applied && mine === this.sequence) {
        this.applied = mine
        this.results = results
        this.status = 'ready'
        this.error = null
      }
    } catch (err) {
      if (mine === this.sequence) {
        this.error = err instanceof Error ? err.message : String(err)
      }
    } finally {
      this.pending -= 1
      this.notify()
    }
  }

  private notify(): void {
    const snapshot = this.view()
    for (const listener of this.listeners) listener(snapshot)
  }
}
