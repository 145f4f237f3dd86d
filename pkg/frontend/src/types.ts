export interface UtilityEntry {
  alternative: string
  expected_utility: number
  utility_min: number
  utility_max: number
}

export interface NodeDistribution {
  beliefs: number[]
  ignorance: number
}

export interface ResultsBody {
  schema: string
  interview_weight: number
  alternatives: string[]
  root: string
  ranking: UtilityEntry[]
  nodes: Record<string, Record<string, NodeDistribution>>
  weights: Record<string, Record<string, number>>
  deviations: Record<string, number[]>
}

export interface ScaleBody {
  labels: string[]
  utilities: number[]
}

export interface AttributeEntry {
  id: string
  name: string
  kind: 'parent' | 'bottom'
  children?: string[]
  scale?: string
  transform?: string
}

export interface ModelBody {
  schema: string
  root: string
  common_scale: ScaleBody & { id: string }
  scales: Record<string, ScaleBody>
  attributes: AttributeEntry[]
  sibling_groups: Record<string, string[]>
  alternatives: string[]
  interview_weight: number
  weights: Record<string, Record<string, number>>
  references: Record<string, number[]>
}

export interface WhatIfOverrides {
  interview_weight?: number
  sibling_weights?: Record<string, Record<string, number>>
  utilities?: Record<string, number[]>
}
