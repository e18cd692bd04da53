"""Ranking-collection HTTP service for live human evaluation sessions.

Hosts configured sessions, hands each rater a seeded shuffle of the stimuli,
validates submitted rankings as strict permutations, and reports per-rater
rank correlation against the ground truth plus group concordance. Every
accepted submission is appended to a journal file before it is acknowledged,
so a crash loses nothing.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .metrics import MetricError, Ranking, kendalls_w, spearman_src


@dataclass
class Stimulus:
    stimulus_id: str
    media_locator: str
    adv_tokens: tuple[int, int, int] | None = None


@dataclass
class RankingSession:
    session_id: str
    axis: str
    stimuli: list[Stimulus]
    ground_truth: Ranking
    shuffle_seed: int = 0
    submitted: dict[str, Ranking] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.stimuli) != self.ground_truth.n:
            raise ValueError(
                f"session {self.session_id!r}: {len(self.stimuli)} stimuli but "
                f"ground truth covers {self.ground_truth.n}"
            )

    def presentation_order(self, rater_id: str) -> list[int]:
        """Deterministic per-rater shuffle of canonical stimulus indices."""
        seed = (self.shuffle_seed + hash_rater(rater_id)) % (2**63)
        rng = np.random.default_rng(seed)
        return [int(i) for i in rng.permutation(len(self.stimuli))]

    def results(self) -> dict:
        per_rater = {
            rater: spearman_src(r, self.ground_truth) for rater, r in sorted(self.submitted.items())
        }
        out: dict = {
            "session_id": self.session_id,
            "raters": len(self.submitted),
            "per_rater_src": per_rater,
            "mean_src": (sum(per_rater.values()) / len(per_rater)) if per_rater else None,
            "kendalls_w": None,
        }
        if len(self.submitted) >= 2:
            out["kendalls_w"] = kendalls_w(list(self.submitted.values()))
        return out


def hash_rater(rater_id: str) -> int:
    # stable across processes, unlike builtin hash()
    h = 0
    for ch in rater_id:
        h = (h * 1000003 + ord(ch)) % (2**61 - 1)
    return h


def load_sessions_config(path: str | Path) -> dict[str, RankingSession]:
    cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    sessions: dict[str, RankingSession] = {}
    for entry in cfg["sessions"]:
        stimuli = [
            Stimulus(
                stimulus_id=str(s["stimulus_id"]),
                media_locator=str(s["media"]),
                adv_tokens=tuple(s["adv"]) if "adv" in s else None,
            )
            for s in entry["stimuli"]
        ]
        session = RankingSession(
            session_id=str(entry["session_id"]),
            axis=str(entry.get("axis", "arousal")),
            stimuli=stimuli,
            ground_truth=Ranking.of(entry["ground_truth_ranks"]),
            shuffle_seed=int(entry.get("shuffle_seed", 0)),
        )
        sessions[session.session_id] = session
    return sessions


class SubmissionBody(BaseModel):
    rater_id: str
    ranks: list[int]


class SessionStore:
    """Sessions plus an append-only submission journal."""

    def __init__(self, sessions: dict[str, RankingSession], journal_path: str | Path):
        self.sessions = sessions
        self.journal_path = Path(journal_path)
        self._lock = threading.Lock()
        self._replay()

    def _replay(self) -> None:
        if not self.journal_path.exists():
            return
        for line in self.journal_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            session = self.sessions.get(rec["session_id"])
            if session is not None and rec["rater_id"] not in session.submitted:
                session.submitted[rec["rater_id"]] = Ranking.of(rec["ranks"])

    def submit(self, session_id: str, rater_id: str, ranks: list[int]) -> Ranking:
        session = self.sessions[session_id]
        try:
            ranking = Ranking.of(ranks)
        except MetricError as exc:
            raise ValueError(str(exc)) from exc
        if ranking.n != session.ground_truth.n:
            raise ValueError(
                f"expected {session.ground_truth.n} ranks, got {ranking.n}"
            )
        with self._lock:
            if rater_id in session.submitted:
                raise KeyError(rater_id)
            with self.journal_path.open("a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {"session_id": session_id, "rater_id": rater_id, "ranks": list(ranks)}
                    )
                    + "\n"
                )
                fh.flush()
            session.submitted[rater_id] = ranking
        return ranking


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="emoquant ranking service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, rater: str = "") -> dict:
        session = store.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        order = session.presentation_order(rater) if rater else list(range(len(session.stimuli)))
        return {
            "session_id": session.session_id,
            "axis": session.axis,
            "n": len(session.stimuli),
            "stimuli": [
                {
                    "stimulus_id": session.stimuli[i].stimulus_id,
                    "media": session.stimuli[i].media_locator,
                    "canonical_index": i,
                }
                for i in order
            ],
        }

    @app.post("/sessions/{session_id}/rankings", status_code=201)
    def post_ranking(session_id: str, body: SubmissionBody) -> dict:
        if session_id not in store.sessions:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        try:
            store.submit(session_id, body.rater_id, body.ranks)
        except KeyError:
            raise HTTPException(status_code=409, detail="rater already submitted")
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session = store.sessions[session_id]
        return {
            "accepted": True,
            "src": spearman_src(session.submitted[body.rater_id], session.ground_truth),
        }

    @app.get("/sessions/{session_id}/results")
    def get_results(session_id: str) -> dict:
        session = store.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session.results()

    return app
