/**
 * Drag-to-rank ordering model.
 *
 * Stimuli start in an unranked pool and are placed one by one into a ranked
 * list; list positions map to 1-based ranks (top of the list = rank 1). Every
 * mutation moves exactly one item between or within the two containers, so the
 * model can only ever describe a partial or total order over the stimulus set.
 * A rank payload is obtainable only once the pool is empty, which makes
 * non-permutation submissions unconstructible by the client.
 */

import type { StimulusView } from './api.js'

export class OrderingError extends Error {
  constructor(message: string) {
    super(message)
    this.name = 'OrderingError'
  }
}

export interface OrderingSnapshot {
  pool: string[]
  ranked: string[]
}

export class OrderingModel {
  private readonly byId = new Map<string, StimulusView>()
  private pool: string[]
  private ranked: string[] = []

  constructor(stimuli: StimulusView[]) {
    for (const s of stimuli) {
      if (this.byId.has(s.stimulus_id)) {
        throw new OrderingError(`duplicate stimulus id ${s.stimulus_id}`)
      }
      this.byId.set(s.stimulus_id, s)
    }
    this.pool = stimuli.map((s) => s.stimulus_id)
  }

  get size(): number {
    return this.byId.size
  }

  get poolIds(): readonly string[] {
    return this.pool
  }

  get rankedIds(): readonly string[] {
    return this.ranked
  }

  stimulus(id: string): StimulusView {
    const s = this.byId.get(id)
    if (s === undefined) throw new OrderingError(`unknown stimulus ${id}`)
    return s
  }

  isComplete(): boolean {
    return this.pool.length === 0
  }

  /** Place a pool item at `position` in the ranked list (clamped). */
  place(id: string, position: number): void {
    const idx = this.pool.indexOf(id)
    if (idx < 0) throw new OrderingError(`${id} is not in the unranked pool`)
    this.pool.splice(idx, 1)
    const pos = Math.max(0, Math.min(position, this.ranked.length))
    this.ranked.splice(pos, 0, id)
  }

  /** Move an already-ranked item to a new position (drag within the list). */
  move(id: string, position: number): void {
    const idx = this.ranked.indexOf(id)
    if (idx < 0) throw new OrderingError(`${id} is not ranked`)
    this.ranked.splice(idx, 1)
    const pos = Math.max(0, Math.min(position, this.ranked.length))
    this.ranked.splice(pos, 0, id)
  }

  /** Return a ranked item to the pool (undo a placement). */
  unplace(id: string): void {
    const idx = this.ranked.indexOf(id)
    if (idx < 0) throw new OrderingError(`${id} is not ranked`)
    this.ranked.splice(idx, 1)
    this.pool.push(id)
  }

  /**
   * Ranks in wire order: result[i] is the 1-based rank of the canonical
   * i-th stimulus. Only available for a complete ordering.
   */
  toRanks(): number[] {
    if (!this.isComplete()) {
      throw new OrderingError(
        `ordering incomplete: ${this.pool.length} of ${this.size} still unranked`,
      )
    }
    const ranks = new Array<number>(this.size)
    this.ranked.forEach((id, listPos) => {
      ranks[this.stimulus(id).canonical_index] = listPos + 1
    })
    return ranks
  }

  snapshot(): OrderingSnapshot {
    return { pool: [...this.pool], ranked: [...this.ranked] }
  }

  /** Restore a snapshot; ignores it unless it covers exactly this stimulus set. */
  restore(snap: OrderingSnapshot): boolean {
    const ids = [...snap.pool, ...snap.ranked]
    if (ids.length !== this.size) return false
    if (new Set(ids).size !== ids.length) return false
    if (!ids.every((id) => this.byId.has(id))) return false
    this.pool = [...snap.pool]
    this.ranked = [...snap.ranked]
    return true
  }
}
