import { describe, expect, it } from 'vitest'

import { AXES, samScaleSvg } from '../src/sam.js'

describe('samScaleSvg', () => {
  it('renders five figures for every axis', () => {
    for (const axis of AXES) {
      const svg = samScaleSvg(axis)
      expect(svg.startsWith('<svg')).toBe(true)
      expect(svg.match(/<g data-figure-t=/g)).toHaveLength(5)
      expect(svg).toContain(`data-axis="${axis}"`)
    }
  })

  it('rejects an unknown axis', () => {
    expect(() => samScaleSvg('spice' as never)).toThrow(/unknown axis/)
  })

  it('dominance figures grow monotonically', () => {
    const svg = samScaleSvg('dominance')
    const radii = [...svg.matchAll(/<circle[^>]*r="([\d.]+)" fill="none"/g)].map((m) =>
      Number(m[1]),
    )
    expect(radii).toHaveLength(5)
    for (let i = 1; i < radii.length; i++) {
      expect(radii[i]!).toBeGreaterThan(radii[i - 1]!)
    }
  })

  it('valence mouths bend from frown to smile', () => {
    const svg = samScaleSvg('valence')
    // the quadratic control point y relative to the mouth endpoints flips sign
    const mouths = [...svg.matchAll(/M [\d.]+ ([\d.]+) Q [\d.]+ ([\d.]+)/g)].map(
      (m) => Number(m[2]) - Number(m[1]),
    )
    expect(mouths).toHaveLength(5)
    expect(mouths[0]!).toBeLessThan(0)
    expect(mouths[2]!).toBe(0)
    expect(mouths[4]!).toBeGreaterThan(0)
  })

  it('arousal bursts grow with the scale position', () => {
    const svg = samScaleSvg('arousal')
    const groups = svg.split('<g data-figure-t=').slice(1)
    const spokeCounts = groups.map((g) => (g.match(/stroke-width="1.5"/g) ?? []).length)
    expect(spokeCounts.every((c) => c === 8)).toBe(true)
  })

  it('labels the scale endpoints', () => {
    const svg = samScaleSvg('arousal')
    expect(svg).toContain('calm')
    expect(svg).toContain('excited')
  })
})
