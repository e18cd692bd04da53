/**
 * Refresh-safe persistence of an in-progress ordering.
 *
 * Stores one snapshot per (session, rater) pair in sessionStorage so a page
 * reload mid-study does not lose placements. The storage backend is
 * injectable for tests and for non-browser callers.
 */

import type { OrderingSnapshot } from './ordering.js'

export interface StorageLike {
  getItem(key: string): string | null
  setItem(key: string, value: string): void
  removeItem(key: string): void
}

const PREFIX = 'sam-ranking:'

function key(sessionId: string, raterId: string): string {
  return `${PREFIX}${sessionId}:${raterId}`
}

export class OrderingStore {
  constructor(private readonly storage: StorageLike) {}

  save(sessionId: string, raterId: string, snap: OrderingSnapshot): void {
    this.storage.setItem(key(sessionId, raterId), JSON.stringify(snap))
  }

  load(sessionId: string, raterId: string): OrderingSnapshot | null {
    const raw = this.storage.getItem(key(sessionId, raterId))
    if (raw === null) return null
    try {
      const parsed = JSON.parse(raw)
      if (Array.isArray(parsed.pool) && Array.isArray(parsed.ranked)) {
        return { pool: parsed.pool.map(String), ranked: parsed.ranked.map(String) }
      }
    } catch {
      // fall through: corrupt entry is treated as absent
    }
    this.storage.removeItem(key(sessionId, raterId))
    return null
  }

  clear(sessionId: string, raterId: string): void {
    this.storage.removeItem(key(sessionId, raterId))
  }
}

export class MemoryStorage implements StorageLike {
  private readonly map = new Map<string, string>()

  getItem(k: string): string | null {
    return this.map.has(k) ? this.map.get(k)! : null
  }

  setItem(k: string, v: string): void {
    this.map.set(k, v)
  }

  removeItem(k: string): void {
    this.map.delete(k)
  }
}
