export const utility = (value: number): string => value.toFixed(4)

export const percent = (value: number): string => `${(value * 100).toFixed(1)}%`

export const weight = (value: number): string => value.toFixed(3)
