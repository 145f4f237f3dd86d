import { describe, expect, it, vi } from 'vitest'

import { ApiError, Client } from '../src/api'

const jsonResponse = (body: unknown, status = 200): Response =>
  new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  })

describe('Client', () => {
  it('fetches and parses the model summary', async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ schema: 'er-mcda-api/1', root: 'adoption' }))
    const client = new Client('http://svc', fetchImpl as unknown as typeof fetch)
    const model = await client.getModel()
    expect(fetchImpl).toHaveBeenCalledWith('http://svc/model')
    expect(model.root).toBe('adoption')
  })

  it('posts overrides as JSON', async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ schema: 'er-mcda-api/1', ranking: [] }))
    const client = new Client('', fetchImpl as unknown as typeof fetch)
    await client.whatIf({ interview_weight: 0.4 })
    const [url, init] = fetchImpl.mock.calls[0] as unknown as [string, RequestInit]
    expect(url).toBe('/whatif')
    expect(init.method).toBe('POST')
    expect(JSON.parse(init.body as string)).toEqual({ interview_weight: 0.4 })
  })

  it('surfaces the service diagnostic on client errors', async () => {
    const fetchImpl = vi.fn(async () =>
      jsonResponse({ detail: "group 'o_v': weights sum to 1.1" }, 400),
    )
    const client = new Client('', fetchImpl as unknown as typeof fetch)
    await expect(client.whatIf({})).rejects.toThrowError(ApiError)
    await expect(client.whatIf({})).rejects.toThrow(/weights sum/)
  })

  it('falls back to the status line for non-JSON errors', async () => {
    const fetchImpl = vi.fn(
      async () => new Response('boom', { status: 502, statusText: 'Bad Gateway' }),
    )
    const client = new Client('', fetchImpl as unknown as typeof fetch)
    await expect(client.getBaseline()).rejects.toThrow(/502/)
  })
})
