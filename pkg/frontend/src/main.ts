/**
 * Browser entry point. Reads session, rater, and service URL from the query
 * string, then renders the ranking page from controller state on every
 * change. Items can be dragged between the unranked pool and the ranked
 * list, or placed with a click; playback order is independent of rank order.
 */

import { RankingApi } from './api.js'
import { SessionController, type ControllerState } from './controller.js'
import { OrderingStore } from './persistence.js'
import { samScaleSvg, type Axis } from './sam.js'

const params = new URLSearchParams(window.location.search)
const sessionId = params.get('session') ?? 'arousal'
const raterId = params.get('rater') ?? ''
const baseUrl = params.get('api') ?? 'http://localhost:8000'

const root = document.getElementById('app')!

function el(tag: string, cls: string, text = ''): HTMLElement {
  const node = document.createElement(tag)
  node.className = cls
  if (text) node.textContent = text
  return node
}

function stimulusRow(
  state: ControllerState,
  id: string,
  ranked: boolean,
  index: number,
): HTMLElement {
  const s = state.ordering!.stimulus(id)
  const row = el('li', ranked ? 'item ranked' : 'item pooled')
  row.draggable = true
  row.dataset.id = id
  if (ranked) row.appendChild(el('span', 'rank', String(index + 1)))
  row.appendChild(el('span', 'label', s.stimulus_id))

  const play = el('button', 'play', '▶') as HTMLButtonElement
  play.addEventListener('click', (ev) => {
    ev.stopPropagation()
    new Audio(s.media).play().catch(() => {})
  })
  row.appendChild(play)

  row.addEventListener('dragstart', (ev) => {
    ev.dataTransfer?.setData('text/plain', id)
  })
  row.addEventListener('click', () => {
    if (ranked) controller.unplace(id)
    else controller.place(id, state.ordering!.rankedIds.length)
  })
  return row
}

function render(state: ControllerState): void {
  root.textContent = ''
  if (state.phase === 'loading') {
    root.appendChild(el('p', 'status', 'loading session…'))
    return
  }
  if (state.phase === 'not_found' || state.phase === 'unreachable') {
    root.appendChild(el('p', 'status error', state.message))
    const retry = el('button', 'retry', 'retry') as HTMLButtonElement
    retry.addEventListener('click', () => void controller.start())
    root.appendChild(retry)
    return
  }
  if (state.phase === 'submitted') {
    root.appendChild(
      el('p', 'status done', `ranking accepted, agreement ${state.src?.toFixed(3)}`),
    )
    return
  }
  if (state.phase === 'conflict') {
    root.appendChild(el('p', 'status error', 'this rater already submitted'))
    return
  }

  const session = state.session!
  root.appendChild(el('h1', 'title', `Rank by ${session.axis}`))
  const scale = el('div', 'sam-scale')
  scale.innerHTML = samScaleSvg(session.axis as Axis)
  root.appendChild(scale)

  const columns = el('div', 'columns')
  const poolBox = el('div', 'column pool-box')
  poolBox.appendChild(el('h2', '', 'Unranked'))
  const poolList = el('ul', 'pool')
  state.ordering!.poolIds.forEach((id, i) =>
    poolList.appendChild(stimulusRow(state, id, false, i)),
  )
  poolBox.appendChild(poolList)

  const rankBox = el('div', 'column rank-box')
  rankBox.appendChild(el('h2', '', `Ranked, 1 = lowest ${session.axis}`))
  const rankList = el('ul', 'ranked')
  state.ordering!.rankedIds.forEach((id, i) =>
    rankList.appendChild(stimulusRow(state, id, true, i)),
  )
  rankList.addEventListener('dragover', (ev) => ev.preventDefault())
  rankList.addEventListener('drop', (ev) => {
    ev.preventDefault()
    const id = ev.dataTransfer?.getData('text/plain')
    if (!id) return
    const rows = Array.from(rankList.querySelectorAll('li'))
    const after = rows.filter(
      (r) => ev.clientY > r.getBoundingClientRect().top + r.offsetHeight / 2,
    )
    const pos = after.length
    if (state.ordering!.poolIds.includes(id)) controller.place(id, pos)
    else controller.move(id, pos)
  })
  rankBox.appendChild(rankList)
  columns.append(poolBox, rankBox)
  root.appendChild(columns)

  const submit = el('button', 'submit', 'Submit ranking') as HTMLButtonElement
  submit.disabled = !controller.canSubmit() || state.phase === 'submitting'
  submit.addEventListener('click', () => void controller.submit())
  root.appendChild(submit)
  if (state.message) root.appendChild(el('p', 'status error', state.message))
}

const controller = new SessionController(
  new RankingApi(baseUrl),
  new OrderingStore(window.sessionStorage),
  sessionId,
  raterId,
  render,
)
void controller.start()
