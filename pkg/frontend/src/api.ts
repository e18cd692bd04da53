/**
 * Typed client for the ranking-collection HTTP service.
 *
 * Wire protocol (JSON over HTTP):
 *   GET  /healthz
 *   GET  /sessions/{id}?rater=NAME
 *   POST /sessions/{id}/rankings   body {rater_id, ranks}, 1-based ranks
 *   GET  /sessions/{id}/results
 */

export interface StimulusView {
  stimulus_id: string
  media: string
  canonical_index: number
}

export interface SessionView {
  session_id: string
  axis: string
  n: number
  stimuli: StimulusView[]
}

export interface SubmissionReceipt {
  accepted: boolean
  src: number
}

export interface SessionResults {
  session_id: string
  raters: number
  per_rater_src: Record<string, number>
  mean_src: number | null
  kendalls_w: number | null
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail)
    this.name = 'ApiError'
  }
}

export class SessionNotFoundError extends ApiError {}
export class DuplicateSubmissionError extends ApiError {}
export class InvalidRankingError extends ApiError {}

type FetchLike = typeof fetch

async function raiseFor(resp: Response): Promise<never> {
  let detail = resp.statusText
  try {
    const body = await resp.json()
    if (typeof body.detail === 'string') detail = body.detail
  } catch {
    // non-JSON error body, keep the status text
  }
  if (resp.status === 404) throw new SessionNotFoundError(404, detail)
  if (resp.status === 409) throw new DuplicateSubmissionError(409, detail)
  if (resp.status === 422) throw new InvalidRankingError(422, detail)
  throw new ApiError(resp.status, detail)
}

export class RankingApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path)
    if (!resp.ok) await raiseFor(resp)
    return resp.json() as Promise<T>
  }

  async health(): Promise<boolean> {
    try {
      const body = await this.get<{ status: string }>('/healthz')
      return body.status === 'ok'
    } catch {
      return false
    }
  }

  /** Fetch a session; `raterId` selects that rater's presentation shuffle. */
  async loadSession(sessionId: string, raterId: string): Promise<SessionView> {
    const q = raterId ? `?rater=${encodeURIComponent(raterId)}` : ''
    return this.get<SessionView>(`/sessions/${encodeURIComponent(sessionId)}${q}`)
  }

  /**
   * Submit a complete ranking. `ranks[i]` is the 1-based rank of the
   * session's canonical i-th stimulus, not the shuffled display order.
   */
  async submitRanking(
    sessionId: string,
    raterId: string,
    ranks: number[],
  ): Promise<SubmissionReceipt> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/rankings`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ rater_id: raterId, ranks }),
      },
    )
    if (!resp.ok) await raiseFor(resp)
    return resp.json() as Promise<SubmissionReceipt>
  }

  async results(sessionId: string): Promise<SessionResults> {
    return this.get<SessionResults>(`/sessions/${encodeURIComponent(sessionId)}/results`)
  }
}
