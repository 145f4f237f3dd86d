const WEIGHT_SUM_TOLERANCE = 1e-9

export const weightVectorError = (weights: Record<string, number>): string | null => {
  const values = Object.values(weights)
  for (const value of values) {
    if (!Number.isFinite(value)) return 'weights must be numbers'
    if (value < 0 || value > 1) return 'each weight must lie in [0, 1]'
  }
  const total = values.reduce((sum, value) => sum + value, 0)
  if (Math.abs(total - 1) > WEIGHT_SUM_TOLERANCE) {
    return `weights sum to ${total.toFixed(4)}, expected 1`
  }
  return null
}

export const splitError = (value: number): string | null => {
  if (!Number.isFinite(value) || value < 0 || value > 1) {
    return 'the split must lie in [0, 1]'
  }
  return null
}
