"""Orchestrated case studies: scripted existence/uniqueness decisions for a
fixed list of parameter arrays, each as a staged exact computation with a
transcript of candidate counts.

Every case follows the same pattern: enumerate the candidate relation schemes
on a few blocks of the imprimitivity partition, embed each candidate into a
small eigenspace with prescribed inner products, extend surviving embeddings
vertex by vertex, and either exhaust all branches (nonexistence) or assemble
and verify a full scheme (uniqueness).  The expected stage counts live in the
catalog returned by list_cases(); run_case re-derives everything and fails
hard on any mismatch.
"""

from dataclasses import dataclass, field


class CaseMismatchError(RuntimeError):
    """A transcript disagrees with the cataloged expectation."""

    def __init__(self, case_id, stage, message):
        super().__init__(f"{case_id}: stage {stage!r}: {message}")
        self.case_id = case_id
        self.stage = stage


@dataclass(frozen=True)
class StageRecord:
    name: str
    candidates: int
    surviving: int

    def render(self):
        return (f"stage={self.name} candidates={self.candidates} "
                f"surviving={self.surviving}")


@dataclass
class CaseTranscript:
    case_id: str
    stages: list = field(default_factory=list)
    verdict: str = ""  # "nonexistence" | "uniqueness" | "example-reconstructed"
    order: int = None
    automorphisms: int = None

    def add(self, name, candidates, surviving):
        self.stages.append(StageRecord(name, int(candidates), int(surviving)))

    def text_lines(self):
        out = [f"case={self.case_id}"]
        out.extend(s.render() for s in self.stages)
        v = f"verdict={self.verdict}"
        if self.verdict == "uniqueness":
            v += f" order={self.order} automorphisms={self.automorphisms}"
        out.append(v)
        return out

    def machine_line(self):
        stages = ";".join(
            f"{s.name}:{s.candidates}:{s.surviving}" for s in self.stages)
        v = self.verdict
        if self.verdict == "uniqueness":
            v += f":{self.order}:{self.automorphisms}"
        return "\t".join([self.case_id, stages, v])


@dataclass(frozen=True)
class CaseExpectation:
    case_id: str
    verdict: str
    # ((stage name, candidates, surviving), ...) or None when only the
    # verdict is pinned down
    stages: tuple = None
    automorphisms: int = None


def _catalog():
    return (
        CaseExpectation(
            "cube8", "uniqueness",
            stages=(("clique embedding", 1, 1),
                    ("extension", 4, 4),
                    ("assembly", 1, 1)),
            automorphisms=48),
        CaseExpectation(
            "qpg4_12_45_52", "nonexistence",
            stages=(("coupling candidates", 48, 6),
                    ("pair embedding", 6, 1),
                    ("extension", 216, 0))),
        CaseExpectation(
            "qpg4_8_45_18", "nonexistence",
            stages=(("one-factors C15", 85184, 5704),
                    ("one-factors C9+C6", 85184, 4736),
                    ("triangle filter C15", 5704, 3637),
                    ("triangle filter C9+C6", 4736, 3028),
                    ("embedding C15", 3637, 55),
                    ("embedding C9+C6", 3028, 45),
                    ("extension per embedded case", 8000, 0))),
        CaseExpectation(
            "qpg5_6_45_22", "nonexistence",
            stages=(("census graphs", 18, 18),
                    ("unique block coloring", 18, 18),
                    ("pair embedding", 18, 7),
                    ("triple embedding", 7, 0))),
        CaseExpectation(
            "qpg5_12_40_2", "uniqueness",
            stages=(("cycle candidates", 2, 2),
                    ("triple embedding", 2, 1),
                    ("extension", 112, 28),
                    ("survivor graph complete", 1, 1),
                    ("assembly", 1, 1)),
            automorphisms=3840),
        CaseExpectation(
            "qpg5_6_45_5", "uniqueness",
            stages=(("triple candidates", 1, 1),
                    ("triple embedding", 1, 1),
                    ("extension", 72, 36),
                    ("survivor cliques", 2, 2),
                    ("assembly", 2, 2)),
            automorphisms=77760),
        CaseExpectation("qpg3_12_35_16", "nonexistence"),
        CaseExpectation("qpg3_18_40_12", "nonexistence"),
        CaseExpectation("smith40_unique", "uniqueness",
                        automorphisms=1920),
    )


def list_cases():
    """Catalog of case ids with their expected verdicts and stage counts."""
    return _catalog()


CASE_IDS = tuple(c.case_id for c in _catalog())


def _check(transcript, expectation):
    if expectation.stages is not None:
        got = {s.name: s for s in transcript.stages}
        for name, cand, surv in expectation.stages:
            if name not in got:
                raise CaseMismatchError(transcript.case_id, name,
                                        "stage missing from transcript")
            s = got[name]
            if (s.candidates, s.surviving) != (cand, surv):
                raise CaseMismatchError(
                    transcript.case_id, name,
                    f"expected {cand}/{surv}, got "
                    f"{s.candidates}/{s.surviving}")
    if transcript.verdict != expectation.verdict:
        raise CaseMismatchError(transcript.case_id, "verdict",
                                f"expected {expectation.verdict}, got "
                                f"{transcript.verdict}")
    if (expectation.automorphisms is not None
            and transcript.automorphisms != expectation.automorphisms):
        raise CaseMismatchError(
            transcript.case_id, "automorphisms",
            f"expected {expectation.automorphisms}, got "
            f"{transcript.automorphisms}")


def run_case(case_id, jobs=1, use_cache=True):
    """Execute one case study and validate its transcript against the
    catalog.  Raises CaseMismatchError on any count or verdict mismatch."""
    from . import _cases
    runners = _cases.runners()
    if case_id not in runners:
        raise ValueError(f"unknown case id {case_id!r}")
    transcript = runners[case_id](jobs=jobs, use_cache=use_cache)
    expectation = next(c for c in _catalog() if c.case_id == case_id)
    _check(transcript, expectation)
    return transcript
