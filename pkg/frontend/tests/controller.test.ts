import { describe, expect, it } from 'vitest'

import { RankingApi } from '../src/api.js'
import { SessionController } from '../src/controller.js'
import { MemoryStorage, OrderingStore } from '../src/persistence.js'

const SESSION = {
  session_id: 'arousal',
  axis: 'arousal',
  n: 3,
  stimuli: [
    { stimulus_id: 's0', media: 'a/s0.wav', canonical_index: 0 },
    { stimulus_id: 's1', media: 'a/s1.wav', canonical_index: 1 },
    { stimulus_id: 's2', media: 'a/s2.wav', canonical_index: 2 },
  ],
}

interface FakeService {
  submissions: { rater: string; ranks: number[] }[]
  fetch: typeof fetch
}

function fakeService(opts: { failSubmitWith?: number } = {}): FakeService {
  const submissions: FakeService['submissions'] = []
  const fetchImpl: typeof fetch = async (input, init) => {
    const url = String(input)
    if (url.includes('/rankings')) {
      if (opts.failSubmitWith !== undefined) {
        return new Response(JSON.stringify({ detail: 'rejected' }), {
          status: opts.failSubmitWith,
        })
      }
      const body = JSON.parse(String(init?.body))
      submissions.push({ rater: body.rater_id, ranks: body.ranks })
      return new Response(JSON.stringify({ accepted: true, src: 1.0 }), { status: 201 })
    }
    if (url.includes('/sessions/arousal')) {
      return new Response(JSON.stringify(SESSION), { status: 200 })
    }
    return new Response(JSON.stringify({ detail: 'unknown session' }), { status: 404 })
  }
  return { submissions, fetch: fetchImpl }
}

function makeController(svc: FakeService, store = new OrderingStore(new MemoryStorage())) {
  return new SessionController(
    new RankingApi('http://svc', svc.fetch),
    store,
    'arousal',
    'alice',
    () => {},
  )
}

describe('SessionController', () => {
  it('loads a session into the ranking phase', async () => {
    const ctl = makeController(fakeService())
    await ctl.start()
    expect(ctl.current.phase).toBe('ranking')
    expect(ctl.current.session?.n).toBe(3)
    expect(ctl.canSubmit()).toBe(false)
  })

  it('unknown session shows the error phase', async () => {
    const svc = fakeService()
    const ctl = new SessionController(
      new RankingApi('http://svc', svc.fetch),
      new OrderingStore(new MemoryStorage()),
      'missing',
      'alice',
    )
    await ctl.start()
    expect(ctl.current.phase).toBe('not_found')
  })

  it('network failure shows a retry prompt, no partial state', async () => {
    const api = new RankingApi('http://svc', async () => {
      throw new TypeError('fetch failed')
    })
    const ctl = new SessionController(api, new OrderingStore(new MemoryStorage()), 'a', 'r')
    await ctl.start()
    expect(ctl.current.phase).toBe('unreachable')
    expect(ctl.current.ordering).toBeNull()
  })

  it('submit stays disabled until the ordering is complete', async () => {
    const svc = fakeService()
    const ctl = makeController(svc)
    await ctl.start()
    ctl.place('s1', 0)
    ctl.place('s0', 1)
    expect(ctl.canSubmit()).toBe(false)
    await ctl.submit()
    expect(svc.submissions).toHaveLength(0)
    ctl.place('s2', 2)
    expect(ctl.canSubmit()).toBe(true)
  })

  it('a complete ordering submits canonical-indexed ranks', async () => {
    const svc = fakeService()
    const ctl = makeController(svc)
    await ctl.start()
    for (const id of ['s2', 's0', 's1']) ctl.place(id, ctl.current.ordering!.rankedIds.length)
    await ctl.submit()
    expect(ctl.current.phase).toBe('submitted')
    expect(ctl.current.src).toBe(1.0)
    expect(svc.submissions).toEqual([{ rater: 'alice', ranks: [2, 3, 1] }])
  })

  it('duplicate submission surfaces the conflict phase', async () => {
    const ctl = makeController(fakeService({ failSubmitWith: 409 }))
    await ctl.start()
    for (const id of ['s0', 's1', 's2']) ctl.place(id, ctl.current.ordering!.rankedIds.length)
    await ctl.submit()
    expect(ctl.current.phase).toBe('conflict')
  })

  it('server validation errors return to ranking with a message', async () => {
    const ctl = makeController(fakeService({ failSubmitWith: 422 }))
    await ctl.start()
    for (const id of ['s0', 's1', 's2']) ctl.place(id, ctl.current.ordering!.rankedIds.length)
    await ctl.submit()
    expect(ctl.current.phase).toBe('ranking')
    expect(ctl.current.message).toBe('rejected')
  })

  it('in-progress placements survive a reload via the store', async () => {
    const store = new OrderingStore(new MemoryStorage())
    const svc = fakeService()
    const ctl = makeController(svc, store)
    await ctl.start()
    ctl.place('s2', 0)
    const reloaded = makeController(svc, store)
    await reloaded.start()
    expect(reloaded.current.ordering!.rankedIds).toEqual(['s2'])
  })

  it('a successful submit clears the persisted ordering', async () => {
    const store = new OrderingStore(new MemoryStorage())
    const ctl = makeController(fakeService(), store)
    await ctl.start()
    for (const id of ['s0', 's1', 's2']) ctl.place(id, ctl.current.ordering!.rankedIds.length)
    await ctl.submit()
    expect(store.load('arousal', 'alice')).toBeNull()
  })
})
