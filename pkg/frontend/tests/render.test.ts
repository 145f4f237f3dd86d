// @vitest-environment jsdom
import { describe, expect, it, vi } from 'vitest'

import { renderDistributions, renderError, renderModel, renderRanking } from '../src/render'
import type { ModelBody, ResultsBody } from '../src/types'

import modelFixture from './fixtures/model.json'
import baselineFixture from './fixtures/baseline.json'

const model = modelFixture as unknown as ModelBody
const baseline = baselineFixture as unknown as ResultsBody

const pane = (): HTMLElement => {
  const node = document.createElement('div')
  document.body.appendChild(node)
  return node
}

describe('renderModel', () => {
  it('initializes the split slider at the baseline weight', () => {
    const container = pane()
    renderModel(container, model, { onSplitChange: () => {}, onGroupChange: () => {} })
    const slider = container.querySelector<HTMLInputElement>('#split-slider')
    expect(slider).not.toBeNull()
    expect(Number(slider!.value)).toBeCloseTo(0.6, 12)
  })

  it('renders one weight input per sibling', () => {
    const container = pane()
    renderModel(container, model, { onSplitChange: () => {}, onGroupChange: () => {} })
    const group = container.querySelector('[data-parent="interviews"]')!
    const inputs = group.querySelectorAll('input[type="number"]')
    expect(inputs).toHaveLength(3) // the three interview groups
  })

  it('flags a weight vector that does not sum to 1 and sends nothing', () => {
    const container = pane()
    const onGroupChange = vi.fn()
    renderModel(container, model, { onSplitChange: () => {}, onGroupChange })
    const group = container.querySelector('[data-parent="interviews"]')!
    const input = group.querySelector<HTMLInputElement>('input[data-child="o_a"]')!
    input.value = '0.9'
    input.dispatchEvent(new Event('input', { bubbles: true }))
    expect(onGroupChange).not.toHaveBeenCalled()
    expect(group.querySelector('[data-role="validation"]')!.textContent).toMatch(/sum/)
  })

  it('forwards a valid weight vector', () => {
    const container = pane()
    const onGroupChange = vi.fn()
    renderModel(container, model, { onSplitChange: () => {}, onGroupChange })
    const group = container.querySelector('[data-parent="interviews"]')!
    const oa = group.querySelector<HTMLInputElement>('input[data-child="o_a"]')!
    const ta = group.querySelector<HTMLInputElement>('input[data-child="t_a"]')!
    const ov = group.querySelector<HTMLInputElement>('input[data-child="o_v"]')!
    oa.value = '0.5'
    ta.value = '0.3'
    ov.value = '0.2'
    ov.dispatchEvent(new Event('input', { bubbles: true }))
    expect(onGroupChange).toHaveBeenCalledWith('interviews', { o_a: 0.5, t_a: 0.3, o_v: 0.2 })
  })
})

describe('renderRanking', () => {
  it('orders bars as ranked and annotates utilities', () => {
    const container = pane()
    renderRanking(container, baseline)
    const rows = [...container.querySelectorAll('.ranking-row')]
    expect(rows.map((r) => (r as HTMLElement).dataset.alternative)).toEqual([
      'Medium', 'Large', 'Small', 'Micro',
    ])
    const first = rows[0] as HTMLElement
    expect(first.querySelector('.ranking-value')!.textContent).toMatch(/^u=0\.4885/)
    expect(Number(first.dataset.utility)).toBeCloseTo(0.48847363969867674, 12)
  })
})

describe('renderDistributions', () => {
  it('renders one segment per positive grade', () => {
    const container = pane()
    renderDistributions(container, baseline, model.common_scale.labels)
    const row = container.querySelector('[data-alternative="Micro"]')!
    const segments = row.querySelectorAll('.dist-segment')
    expect(segments.length).toBeGreaterThanOrEqual(4)
  })

  it('shows an ignorance segment when belief mass is unassigned', () => {
    const container = pane()
    const withIgnorance: ResultsBody = {
      ...baseline,
      alternatives: ['X'],
      nodes: { X: { [baseline.root]: { beliefs: [0.3, 0.2, 0, 0, 0], ignorance: 0.5 } } },
    }
    renderDistributions(container, withIgnorance, model.common_scale.labels)
    const segment = container.querySelector<HTMLElement>('.dist-ignorance')
    expect(segment).not.toBeNull()
    expect(Number(segment!.dataset.belief)).toBeCloseTo(0.5, 12)
  })

  it('renders no ignorance segment for complete distributions', () => {
    const container = pane()
    renderDistributions(container, baseline, model.common_scale.labels)
    expect(container.querySelector('.dist-ignorance')).toBeNull()
  })
})

describe('renderError', () => {
  it('shows the message and a retry affordance', () => {
    const container = pane()
    const onRetry = vi.fn()
    renderError(container, 'service unreachable', onRetry)
    expect(container.querySelector('.error-message')!.textContent).toBe('service unreachable')
    container.querySelector<HTMLButtonElement>('.error-retry')!.click()
    expect(onRetry).toHaveBeenCalledOnce()
  })
})
