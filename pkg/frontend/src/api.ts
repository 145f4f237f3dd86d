import type { ModelBody, ResultsBody, WhatIfOverrides } from './types.js'

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail)
    this.name = 'ApiError'
  }
}

const toJson = async <T>(response: Response): Promise<T> => {
  if (!response.ok) {
    let detail = `${response.status} ${response.statusText}`
    try {
      const body = (await response.json()) as { detail?: string }
      if (body.detail) detail = body.detail
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail)
  }
  return (await response.json()) as T
}

export class Client {
  constructor(
    private readonly baseUrl = '',
    private readonly fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  getModel(): Promise<ModelBody> {
    return this.fetchImpl(`${this.baseUrl}/model`).then((r) => toJson<ModelBody>(r))
  }

  getBaseline(): Promise<ResultsBody> {
    return this.fetchImpl(`${this.baseUrl}/evaluate`).then((r) => toJson<ResultsBody>(r))
  }

  whatIf(overrides: WhatIfOverrides): Promise<ResultsBody> {
    return this.fetchImpl(`${this.baseUrl}/whatif`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(overrides),
    }).then((r) => toJson<ResultsBody>(r))
  }
}
