import { Client } from './api.js'
import { renderDistributions, renderError, renderModel, renderRanking, renderStatus } from './render.js'
import { WhatIfSession } from './state.js'
import type { ModelBody } from './types.js'

const required = (doc: Document, id: string): HTMLElement => {
  const node = doc.getElementById(id)
  if (!node) throw new Error(`missing #${id} in the page`)
  return node
}

export const bootstrap = async (doc: Document, baseUrl = ''): Promise<void> => {
  const client = new Client(baseUrl)
  const modelPane = required(doc, 'model')
  const rankingPane = required(doc, 'ranking')
  const distributionPane = required(doc, 'distributions')
  const statusPane = required(doc, 'status')

  let model: ModelBody
  try {
    model = await client.getModel()
  } catch (err) {
    renderError(modelPane, err instanceof Error ? err.message : String(err), () => {
      void bootstrap(doc, baseUrl)
    })
    return
  }

  const session = new WhatIfSession(client)
  renderModel(modelPane, model, {
    onSplitChange: (value) => session.setInterviewWeight(value),
    onGroupChange: (parent, weights) => session.setSiblingWeights(parent, weights),
  })
  session.subscribe((view) => {
    renderStatus(statusPane, view.pending, view.validationError)
    if (view.status === 'error' && !view.results) {
      renderError(rankingPane, view.error ?? 'service unreachable', () => {
        void session.initialize()
      })
      return
    }
    if (view.results) {
      renderRanking(rankingPane, view.results)
      renderDistributions(distributionPane, view.results, model.common_scale.labels)
    }
  })
  await session.initialize()
}

declare global {
  interface Window {
    ermcdaBootstrap: typeof bootstrap
  }
}

if (typeof window !== 'undefined') {
  window.ermcdaBootstrap = bootstrap
  if (window.document.readyState !== 'loading') {
    void bootstrap(window.document)
  } else {
    window.document.addEventListener('DOMContentLoaded', () => void bootstrap(window.document))
  }
}
