/**
 * DOM-free page controller: owns the session lifecycle, the ordering model,
 * and persistence, and notifies a render callback after every state change.
 * One submission is in flight at a time; a duplicate submit is surfaced as a
 * conflict rather than retried.
 */

import {
  DuplicateSubmissionError,
  RankingApi,
  SessionNotFoundError,
  type SessionView,
} from './api.js'
import { OrderingModel } from './ordering.js'
import { OrderingStore } from './persistence.js'

export type Phase =
  | 'loading'
  | 'ranking'
  | 'submitting'
  | 'submitted'
  | 'conflict'
  | 'not_found'
  | 'unreachable'

export interface ControllerState {
  phase: Phase
  session: SessionView | null
  ordering: OrderingModel | null
  src: number | null
  message: string
}

export class SessionController {
  private state: ControllerState = {
    phase: 'loading',
    session: null,
    ordering: null,
    src: null,
    message: '',
  }

  constructor(
    private readonly api: RankingApi,
    private readonly store: OrderingStore,
    private readonly sessionId: string,
    private readonly raterId: string,
    private readonly onChange: (state: ControllerState) => void = () => {},
  ) {}

  get current(): ControllerState {
    return this.state
  }

  private set(patch: Partial<ControllerState>): void {
    this.state = { ...this.state, ...patch }
    this.onChange(this.state)
  }

  async start(): Promise<void> {
    this.set({ phase: 'loading', message: '' })
    let session: SessionView
    try {
      session = await this.api.loadSession(this.sessionId, this.raterId)
    } catch (err) {
      if (err instanceof SessionNotFoundError) {
        this.set({ phase: 'not_found', message: err.message })
      } else {
        this.set({ phase: 'unreachable', message: 'service unreachable, retry' })
      }
      return
    }
    const ordering = new OrderingModel(session.stimuli)
    const saved = this.store.load(this.sessionId, this.raterId)
    if (saved !== null) ordering.restore(saved)
    this.set({ phase: 'ranking', session, ordering })
  }

  canSubmit(): boolean {
    return (
      this.state.phase === 'ranking' &&
      this.state.ordering !== null &&
      this.state.ordering.isComplete()
    )
  }

  private persist(): void {
    if (this.state.ordering !== null) {
      this.store.save(this.sessionId, this.raterId, this.state.ordering.snapshot())
    }
  }

  place(id: string, position: number): void {
    this.state.ordering?.place(id, position)
    this.persist()
    this.set({})
  }

  move(id: string, position: number): void {
    this.state.ordering?.move(id, position)
    this.persist()
    this.set({})
  }

  unplace(id: string): void {
    this.state.ordering?.unplace(id)
    this.persist()
    this.set({})
  }

  async submit(): Promise<void> {
    if (!this.canSubmit()) return
    const ranks = this.state.ordering!.toRanks()
    this.set({ phase: 'submitting' })
    try {
      const receipt = await this.api.submitRanking(this.sessionId, this.raterId, ranks)
      this.store.clear(this.sessionId, this.raterId)
      this.set({ phase: 'submitted', src: receipt.src })
    } catch (err) {
      if (err instanceof DuplicateSubmissionError) {
        this.set({ phase: 'conflict', message: err.message })
      } else {
        this.set({
          phase: 'ranking',
          message: err instanceof Error ? err.message : String(err),
        })
      }
    }
  }
}
