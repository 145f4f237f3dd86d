import { percent, utility, weight } from './format.js'
import type { ModelBody, ResultsBody } from './types.js'

const GRADE_COLORS = ['#c0392b', '#e67e22', '#f1c40f', '#27ae60', '#1e8449']
const IGNORANCE_COLOR = '#95a5a6'

const el = <K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] => {
  const node = doc.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

export interface ModelHandlers {
  onSplitChange: (value: number) => void
  onGroupChange: (parent: string, weights: Record<string, number>) => void
}

/** Sliders for the top split and every sibling group, seeded with baseline weights. */
export const renderModel = (
  container: HTMLElement,
  model: ModelBody,
  handlers: ModelHandlers,
): void => {
  const doc = container.ownerDocument
  container.replaceChildren()
  const names = new Map(model.attributes.map((a) => [a.id, a.name]))

  const splitBox = el(doc, 'section', 'group split-group')
  splitBox.appendChild(el(doc, 'h3', undefined, 'interview / questionnaire split'))
  const splitSlider = el(doc, 'input') as HTMLInputElement
  splitSlider.type = 'range'
  splitSlider.min = '0'
  splitSlider.max = '1'
  splitSlider.step = '0.01'
  splitSlider.value = String(model.interview_weight)
  splitSlider.id = 'split-slider'
  const splitLabel = el(doc, 'span', 'split-value', weight(model.interview_weight))
  splitSlider.addEventListener('input', () => {
    const value = Number(splitSlider.value)
    splitLabel.textContent = weight(value)
    handlers.onSplitChange(value)
  })
  splitBox.append(splitSlider, splitLabel)
  container.appendChild(splitBox)

  const anyAlternative = model.alternatives[0]
  const baseline = model.weights[anyAlternative] ?? {}
  for (const [parent, children] of Object.entries(model.sibling_groups)) {
    if (parent === model.root) continue // the split slider owns the top group
    const box = el(doc, 'section', 'group')
    box.dataset.parent = parent
    box.appendChild(el(doc, 'h3', undefined, names.get(parent) ?? parent))
    const inputs = new Map<string, HTMLInputElement>()
    const note = el(doc, 'p', 'group-note')
    note.dataset.role = 'validation'
    for (const child of children) {
      const row = el(doc, 'label', 'weight-row')
      row.appendChild(el(doc, 'span', 'weight-name', names.get(child) ?? child))
      const input = el(doc, 'input') as HTMLInputElement
      input.type = 'number'
      input.min = '0'
      input.max = '1'
      input.step = '0.01'
      input.value = weight(baseline[child] ?? 0)
      input.dataset.child = child
      inputs.set(child, input)
      input.addEventListener('input', () => {
        const vector: Record<string, number> = {}
        for (const [id, box2] of inputs) vector[id] = Number(box2.value)
        const total = Object.values(vector).reduce((s, v) => s + v, 0)
        if (Math.abs(total - 1) > 1e-9) {
          note.textContent = `weights sum to ${total.toFixed(3)}, expected 1`
          return // invalid entry: inline message, no request
        }
        note.textContent = ''
        handlers.onGroupChange(parent, vector)
      })
      row.appendChild(input)
      box.appendChild(row)
    }
    box.appendChild(note)
    container.appendChild(box)
  }
}

/** Ranking bar chart: one bar per alternative, best first, annotated with utility. */
export const renderRanking = (container: HTMLElement, results: ResultsBody): void => {
  const doc = container.ownerDocument
  container.replaceChildren()
  for (const entry of results.ranking) {
    const row = el(doc, 'div', 'ranking-row')
    row.dataset.alternative = entry.alternative
    row.dataset.utility = String(entry.expected_utility)
    row.appendChild(el(doc, 'span', 'ranking-name', entry.alternative))
    const track = el(doc, 'div', 'ranking-track')
    const bar = el(doc, 'div', 'ranking-bar')
    bar.style.width = percent(Math.max(0, Math.min(1, entry.expected_utility)))
    track.appendChild(bar)
    row.appendChild(track)
    row.appendChild(el(doc, 'span', 'ranking-value', `u=${utility(entry.expected_utility)}`))
    container.appendChild(row)
  }
}

/** Stacked belief bars per alternative: one segment per grade plus ignorance. */
export const renderDistributions = (
  container: HTMLElement,
  results: ResultsBody,
  gradeLabels: string[],
): void => {
  const doc = container.ownerDocument
  container.replaceChildren()
  for (const alternative of results.alternatives) {
    const root = results.nodes[alternative]?.[results.root]
    if (!root) continue
    const row = el(doc, 'div', 'dist-row')
    row.dataset.alternative = alternative
    row.appendChild(el(doc, 'span', 'dist-name', alternative))
    const bar = el(doc, 'div', 'dist-bar')
    root.beliefs.forEach((belief, index) => {
      if (belief <= 0) return
      const segment = el(doc, 'div', 'dist-segment')
      segment.dataset.grade = gradeLabels[index] ?? `grade ${index + 1}`
      segment.dataset.belief = String(belief)
      segment.style.width = percent(belief)
      segment.style.backgroundColor = GRADE_COLORS[index % GRADE_COLORS.length]
      segment.title = `${segment.dataset.grade}: ${percent(belief)}`
      bar.appendChild(segment)
    })
    if (root.ignorance > 0) {
      const segment = el(doc, 'div', 'dist-segment dist-ignorance')
      segment.dataset.grade = 'ignorance'
      segment.dataset.belief = String(root.ignorance)
      segment.style.width = percent(root.ignorance)
      segment.style.backgroundColor = IGNORANCE_COLOR
      segment.title = `ignorance: ${percent(root.ignorance)}`
      bar.appendChild(segment)
    }
    row.appendChild(bar)
    container.appendChild(row)
  }
}

export const renderError = (
  container: HTMLElement,
  message: string,
  onRetry: () => void,
): void => {
  const doc = container.ownerDocument
  container.replaceChildren()
  const box = el(doc, 'div', 'error-box')
  box.appendChild(el(doc, 'p', 'error-message', message))
  const retry = el(doc, 'button', 'error-retry', 'retry')
  retry.addEventListener('click', onRetry)
  box.appendChild(retry)
  container.appendChild(box)
}

export const renderStatus = (
  container: HTMLElement,
  pending: boolean,
  validationError: string | null,
): void => {
  container.textContent = validationError ?? (pending ? 'updating…' : '')
  container.className = validationError ? 'status status-invalid' : 'status'
}
