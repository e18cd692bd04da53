/**
 * Inline pictorial manikin scale for one affect axis.
 *
 * Renders five schematic figures arrayed along a horizontal scale, low to
 * high. Arousal varies the chest burst and eye opening, dominance varies the
 * figure size, valence varies the mouth curvature. The artwork is a simple
 * approximation; the contract is only that each axis produces a visibly
 * monotone progression.
 */

export type Axis = 'arousal' | 'dominance' | 'valence'

export const AXES: readonly Axis[] = ['arousal', 'dominance', 'valence']

export const AXIS_CAPTIONS: Record<Axis, { low: string; high: string }> = {
  arousal: { low: 'calm', high: 'excited' },
  dominance: { low: 'controlled', high: 'in control' },
  valence: { low: 'unpleasant', high: 'pleasant' },
}

const FIGURES = 5
const CELL = 90
const HEIGHT = 120

function manikin(axis: Axis, t: number, cx: number): string {
  const scale = axis === 'dominance' ? 0.55 + 0.45 * t : 0.8
  const headR = 16 * scale
  const headCy = 34
  const bodyTop = headCy + headR
  const bodyH = 44 * scale
  const bodyW = 30 * scale
  const parts: string[] = []

  parts.push(
    `<circle cx="${cx}" cy="${headCy}" r="${headR.toFixed(1)}" ` +
      `fill="none" stroke="black" stroke-width="2"/>`,
  )
  parts.push(
    `<rect x="${(cx - bodyW / 2).toFixed(1)}" y="${bodyTop.toFixed(1)}" ` +
      `width="${bodyW.toFixed(1)}" height="${bodyH.toFixed(1)}" rx="6" ` +
      `fill="none" stroke="black" stroke-width="2"/>`,
  )

  const eyeDx = headR * 0.42
  const eyeCy = headCy - headR * 0.15
  if (axis === 'arousal') {
    // closed-line eyes when calm, round eyes when excited
    const eyeR = 1 + 3.5 * t
    for (const sgn of [-1, 1]) {
      const ex = cx + sgn * eyeDx
      parts.push(
        t < 0.25
          ? `<line x1="${(ex - 3).toFixed(1)}" y1="${eyeCy.toFixed(1)}" ` +
              `x2="${(ex + 3).toFixed(1)}" y2="${eyeCy.toFixed(1)}" ` +
              `stroke="black" stroke-width="2"/>`
          : `<circle cx="${ex.toFixed(1)}" cy="${eyeCy.toFixed(1)}" ` +
              `r="${eyeR.toFixed(1)}" fill="black"/>`,
      )
    }
    // chest burst grows with arousal
    const burstR = 3 + 14 * t
    const burstCy = bodyTop + bodyH / 2
    const spokes: string[] = []
    for (let k = 0; k < 8; k++) {
      const ang = (Math.PI * k) / 4
      spokes.push(
        `<line x1="${(cx + 0.35 * burstR * Math.cos(ang)).toFixed(1)}" ` +
          `y1="${(burstCy + 0.35 * burstR * Math.sin(ang)).toFixed(1)}" ` +
          `x2="${(cx + burstR * Math.cos(ang)).toFixed(1)}" ` +
          `y2="${(burstCy + burstR * Math.sin(ang)).toFixed(1)}" ` +
          `stroke="black" stroke-width="1.5"/>`,
      )
    }
    parts.push(...spokes)
  } else {
    for (const sgn of [-1, 1]) {
      parts.push(
        `<circle cx="${(cx + sgn * eyeDx).toFixed(1)}" cy="${eyeCy.toFixed(1)}" ` +
          `r="2.5" fill="black"/>`,
      )
    }
  }

  // mouth: flat for arousal/dominance, curved for valence
  const mouthY = headCy + headR * 0.45
  const mouthW = headR * 0.9
  const bend = axis === 'valence' ? (t - 0.5) * 16 : 0
  parts.push(
    `<path d="M ${(cx - mouthW / 2).toFixed(1)} ${mouthY.toFixed(1)} ` +
      `Q ${cx.toFixed(1)} ${(mouthY + bend).toFixed(1)} ` +
      `${(cx + mouthW / 2).toFixed(1)} ${mouthY.toFixed(1)}" ` +
      `fill="none" stroke="black" stroke-width="2"/>`,
  )
  return `<g data-figure-t="${t.toFixed(2)}">${parts.join('')}</g>`
}

/** Full scale for one axis as an SVG string, five figures low to high. */
export function samScaleSvg(axis: Axis): string {
  if (!AXES.includes(axis)) {
    throw new Error(`unknown axis ${axis}`)
  }
  const width = FIGURES * CELL
  const figures: string[] = []
  for (let i = 0; i < FIGURES; i++) {
    figures.push(manikin(axis, i / (FIGURES - 1), CELL * i + CELL / 2))
  }
  const caption = AXIS_CAPTIONS[axis]
  const labels =
    `<text x="4" y="${HEIGHT - 6}" font-size="11">${caption.low}</text>` +
    `<text x="${width - 4}" y="${HEIGHT - 6}" font-size="11" ` +
    `text-anchor="end">${caption.high}</text>`
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${HEIGHT}" ` +
    `role="img" aria-label="${axis} scale" data-axis="${axis}">` +
    `${figures.join('')}${labels}</svg>`
  )
}
