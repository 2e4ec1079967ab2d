# chaincalc/io.py - JSON file formats for chains, adversaries, traces and tests
"""
Every file is UTF-8 JSON validated by a pydantic model on load. Rationals
travel as "p/q" strings and are parsed exactly; points are [x, y] and
rectangles [[xlo, xhi], [ylo, yhi]]. A chain file holds "arc_chains" and,
when labelled, one row of [lo, hi] labels per arc chain under "labels".
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Type, TypeVar

import pandas as pd
from pydantic import BaseModel, ValidationError, field_validator, model_serializer, model_validator

from .arcs import MLTestLevel
from .chains import ArcChain, LabelledArcChain, make_labelled, validate_arc_chain
from .construction import ActionRecord, Adversary, StageState, Trace, curve_length
from .errors import ChainCalcError, FormatError
from .evaluation import Polyline
from .geometry import Interval, Point, Rect, Region, Segment, format_rational, parse_rational

logger = logging.getLogger("chaincalc.io")

M = TypeVar("M", bound=BaseModel)


def _rational_text(value: Any) -> str:
    return format_rational(parse_rational(value))


# models
# points travel as [x, y], rectangles as [[xlo, xhi], [ylo, yhi]], labels as [lo, hi]
def _pair(value: Any, what: str) -> Tuple[Any, Any]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValueError(f"{what} must be a pair, got {value!r}")
    return value[0], value[1]


class PointModel(BaseModel):
    x: str
    y: str

    @model_validator(mode="before")
    @classmethod
    def from_pair(cls, value: Any) -> Any:
        if not isinstance(value, (list, tuple)):
            return value
        x, y = _pair(value, "point")
        return {"x": x, "y": y}

    @field_validator("x", "y", mode="before")
    @classmethod
    def normalize_rational(cls, value: Any) -> str:
        return _rational_text(value)

    @model_serializer
    def as_pair(self) -> List[str]:
        return [self.x, self.y]

    def to_point(self) -> Point:
        return Point(Fraction(self.x), Fraction(self.y))

    @classmethod
    def of(cls, p: Point) -> "PointModel":
        return cls(x=format_rational(p.x), y=format_rational(p.y))


class RectModel(BaseModel):
    xlo: str
    xhi: str
    ylo: str
    yhi: str

    @model_validator(mode="before")
    @classmethod
    def from_spans(cls, value: Any) -> Any:
        if not isinstance(value, (list, tuple)):
            return value
        xspan, yspan = _pair(value, "rectangle")
        xlo, xhi = _pair(xspan, "x span")
        ylo, yhi = _pair(yspan, "y span")
        return {"xlo": xlo, "xhi": xhi, "ylo": ylo, "yhi": yhi}

    @field_validator("xlo", "xhi", "ylo", "yhi", mode="before")
    @classmethod
    def normalize_rational(cls, value: Any) -> str:
        return _rational_text(value)

    @model_serializer
    def as_spans(self) -> List[List[str]]:
        return [[self.xlo, self.xhi], [self.ylo, self.yhi]]

    def to_rect(self) -> Rect:
        return Rect(Fraction(self.xlo), Fraction(self.xhi), Fraction(self.ylo), Fraction(self.yhi))

    @classmethod
    def of(cls, r: Rect) -> "RectModel":
        return cls(xlo=format_rational(r.xlo), xhi=format_rational(r.xhi),
                   ylo=format_rational(r.ylo), yhi=format_rational(r.yhi))


class LabelModel(BaseModel):
    lo: str
    hi: str

    @model_validator(mode="before")
    @classmethod
    def from_pair(cls, value: Any) -> Any:
        if not isinstance(value, (list, tuple)):
            return value
        lo, hi = _pair(value, "label")
        return {"lo": lo, "hi": hi}

    @field_validator("lo", "hi", mode="before")
    @classmethod
    def normalize_rational(cls, value: Any) -> str:
        return _rational_text(value)

    @model_serializer
    def as_pair(self) -> List[str]:
        return [self.lo, self.hi]

    def to_interval(self) -> Interval:
        return Interval(Fraction(self.lo), Fraction(self.hi), closed=True)

    @classmethod
    def of(cls, iv: Interval) -> "LabelModel":
        return cls(lo=format_rational(iv.lo), hi=format_rational(iv.hi))


class SegmentModel(BaseModel):
    a: PointModel
    b: PointModel

    def to_segment(self) -> Segment:
        return Segment(self.a.to_point(), self.b.to_point())

    @classmethod
    def of(cls, s: Segment) -> "SegmentModel":
        return cls(a=PointModel.of(s.a), b=PointModel.of(s.b))


# arc chain = list of witnessing chains = list of lists of rectangles
ArcChainData = List[List[RectModel]]


def _arc_data(arc: ArcChain) -> ArcChainData:
    return [[RectModel.of(r) for r in w.links] for w in arc.chains]


def _arc_from(data: ArcChainData) -> ArcChain:
    return validate_arc_chain([[r.to_rect() for r in links] for links in data])


class ChainFileModel(BaseModel):
    arc_chains: List[ArcChainData]
    labels: Optional[List[List[LabelModel]]] = None
    polyline: Optional[List[PointModel]] = None
    meta: Dict[str, Any] = {}


class RevealedChainModel(BaseModel):
    reveal: int
    chain: ArcChainData


class AdversaryModel(BaseModel):
    e: int
    total: bool = True
    chains: List[RevealedChainModel]

    def to_adversary(self) -> Adversary:
        return Adversary(self.e, tuple(_arc_from(c.chain) for c in self.chains),
                         tuple(c.reveal for c in self.chains), self.total)

    @classmethod
    def of(cls, adv: Adversary) -> "AdversaryModel":
        return cls(e=adv.e, total=adv.total,
                   chains=[RevealedChainModel(reveal=r, chain=_arc_data(c))
                           for c, r in zip(adv.chains, adv.reveals)])


class AdversaryFileModel(BaseModel):
    adversaries: List[AdversaryModel]


RegionData = List[RectModel]


def _regions_data(regions: Dict[int, Region]) -> Dict[str, RegionData]:
    return {str(e): [RectModel.of(r) for r in reg.parts] for e, reg in sorted(regions.items())}


def _regions_from(data: Dict[str, RegionData]) -> Dict[int, Region]:
    return {int(e): Region(tuple(r.to_rect() for r in parts)) for e, parts in data.items()}


class ActionModel(BaseModel):
    stage: int
    e: int
    i: int
    R: RectModel
    l: SegmentModel
    p: PointModel
    scale: str
    gadget: List[SegmentModel]
    new_regions: Dict[str, RegionData]

    def to_record(self) -> ActionRecord:
        return ActionRecord(self.stage, self.e, self.i, self.R.to_rect(), self.l.to_segment(),
                            self.p.to_point(), parse_rational(self.scale),
                            tuple(s.to_segment() for s in self.gadget), _regions_from(self.new_regions))

    @classmethod
    def of(cls, a: ActionRecord) -> "ActionModel":
        return cls(stage=a.stage, e=a.e, i=a.i, R=RectModel.of(a.R), l=SegmentModel.of(a.l),
                   p=PointModel.of(a.p), scale=format_rational(a.scale),
                   gadget=[SegmentModel.of(s) for s in a.gadget],
                   new_regions=_regions_data(a.new_regions))


class StageModel(BaseModel):
    t: int
    segments: List[SegmentModel]
    regions: Dict[str, RegionData]
    p: PointModel
    v: SegmentModel
    rungs: Dict[str, SegmentModel]
    midpoints: Dict[str, PointModel]
    log_length: int


class TraceFileModel(BaseModel):
    emax: int
    comb_depth: int
    adversaries: List[AdversaryModel]
    annotations: List[str] = []
    actions: List[ActionModel]
    states: List[StageModel]


class MLTestLevelModel(BaseModel):
    n: int
    measure: str
    rects: List[RectModel]


class MLTestFileModel(BaseModel):
    depth: int
    levels: List[MLTestLevelModel]


#  Reading and writing

def _read(path, model: Type[M]) -> M:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise FormatError(f"{path}: {e.error_count()} validation errors; first: {e.errors()[0]['msg']}") from e


def _write(path, model: BaseModel) -> None:
    Path(path).write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug(f"wrote {path}")


def save_chains(path, chains: Sequence[ArcChain], polyline: Optional[Polyline] = None,
                meta: Optional[Dict[str, Any]] = None,
                labels: Optional[Sequence[Sequence[Interval]]] = None) -> None:
    _write(path, ChainFileModel(
        arc_chains=[_arc_data(c) for c in chains],
        labels=[[LabelModel.of(iv) for iv in row] for row in labels] if labels is not None else None,
        polyline=[PointModel.of(p) for p in polyline.vertices] if polyline else None,
        meta=meta or {},
    ))


def save_labelled(path, seq: Sequence[LabelledArcChain], meta: Optional[Dict[str, Any]] = None) -> None:
    save_chains(path, [lab.arc for lab in seq], meta=meta, labels=[lab.labels for lab in seq])


class ChainFile(NamedTuple):
    chains: List[ArcChain]
    polyline: Optional[Polyline]
    labelled: Optional[List[LabelledArcChain]]


def load_chain_file(path) -> ChainFile:
    """
    Read a chain file, plain or labelled.

    Raises:
        FormatError: malformed JSON, invalid chains, or labels that do not
            match their chains
    """
    model = _read(path, ChainFileModel)
    try:
        chains = [_arc_from(c) for c in model.arc_chains]
        poly = Polyline(tuple(p.to_point() for p in model.polyline)) if model.polyline else None
        labelled = None
        if model.labels is not None:
            if len(model.labels) != len(chains):
                raise FormatError(f"{path}: {len(model.labels)} label rows for {len(chains)} arc chains")
            labelled = [make_labelled(arc, [iv.to_interval() for iv in row])
                        for arc, row in zip(chains, model.labels)]
    except FormatError:
        raise
    except ChainCalcError as e:
        raise FormatError(f"{path}: {e}") from e
    return ChainFile(chains, poly, labelled)


def load_chains(path) -> List[ArcChain]:
    return load_chain_file(path).chains


def load_labelled(path) -> List[LabelledArcChain]:
    labelled = load_chain_file(path).labelled
    if labelled is None:
        raise FormatError(f"{path}: no labels")
    return labelled


def save_adversaries(path, adversaries: Sequence[Adversary]) -> None:
    _write(path, AdversaryFileModel(adversaries=[AdversaryModel.of(a) for a in adversaries]))


def load_adversaries(path) -> List[Adversary]:
    model = _read(path, AdversaryFileModel)
    try:
        return [a.to_adversary() for a in model.adversaries]
    except ChainCalcError as e:
        raise FormatError(f"{path}: {e}") from e


def trace_model(trace: Trace) -> TraceFileModel:
    actions = list(trace.states[-1].action_log)
    states = []
    for s in trace.states:
        if tuple(actions[:len(s.action_log)]) != s.action_log:
            raise FormatError(f"action log of stage {s.t} is not a prefix of the final log")
        states.append(StageModel(
            t=s.t,
            segments=[SegmentModel.of(g) for g in s.segments],
            regions=_regions_data(s.regions),
            p=PointModel.of(s.p),
            v=SegmentModel.of(s.v),
            rungs={str(e): SegmentModel.of(g) for e, g in sorted(s.rungs.items())},
            midpoints={str(e): PointModel.of(q) for e, q in sorted(s.midpoints.items())},
            log_length=len(s.action_log),
        ))
    return TraceFileModel(
        emax=trace.emax, comb_depth=trace.comb_depth,
        adversaries=[AdversaryModel.of(a) for a in trace.adversaries],
        annotations=list(trace.annotations),
        actions=[ActionModel.of(a) for a in actions],
        states=states,
    )


def trace_from_model(model: TraceFileModel) -> Trace:
    actions = tuple(a.to_record() for a in model.actions)
    states = []
    for s in model.states:
        if s.log_length > len(actions):
            raise FormatError(f"stage {s.t} refers to {s.log_length} actions, file has {len(actions)}")
        states.append(StageState(
            t=s.t,
            segments=tuple(g.to_segment() for g in s.segments),
            regions=_regions_from(s.regions),
            p=s.p.to_point(),
            v=s.v.to_segment(),
            rungs={int(e): g.to_segment() for e, g in s.rungs.items()},
            midpoints={int(e): q.to_point() for e, q in s.midpoints.items()},
            action_log=actions[:s.log_length],
        ))
    if not states:
        raise FormatError("trace has no stages")
    return Trace(states, [a.to_adversary() for a in model.adversaries], model.emax,
                 model.comb_depth, list(model.annotations))


def save_trace(path, trace: Trace) -> None:
    _write(path, trace_model(trace))


def load_trace(path) -> Trace:
    model = _read(path, TraceFileModel)
    try:
        return trace_from_model(model)
    except FormatError:
        raise
    except ChainCalcError as e:
        raise FormatError(f"{path}: {e}") from e


def save_ml_test(path, levels: Sequence[MLTestLevel], depth: int) -> None:
    _write(path, MLTestFileModel(depth=depth, levels=[
        MLTestLevelModel(n=lv.n, measure=format_rational(lv.measure),
                         rects=[RectModel.of(r) for r in lv.rects])
        for lv in levels
    ]))


def load_ml_test(path) -> List[MLTestLevel]:
    model = _read(path, MLTestFileModel)
    return [MLTestLevel(lv.n, tuple(r.to_rect() for r in lv.rects), parse_rational(lv.measure))
            for lv in model.levels]


#  Tabular summaries

def trace_summary_frame(trace: Trace) -> pd.DataFrame:
    """One row per stage: segment count, exact length, p_t and the action taken."""
    rows = []
    for s in trace.states:
        act = s.last_action
        length = curve_length(s)
        rows.append({
            't': s.t,
            'segments': len(s.segments),
            'length': format_rational(length),
            'length_approx': float(length),
            'p': f"({format_rational(s.p.x)}, {format_rational(s.p.y)})",
            'acting_e': act.e if act else None,
            'element': act.i if act else None,
            'scale': format_rational(act.scale) if act else None,
        })
    return pd.DataFrame(rows)


def report_json(report: dict) -> str:
    """Serialise a verification report, rationals as "p/q"."""
    def encode(value):
        if isinstance(value, Fraction):
            return format_rational(value)
        raise TypeError(f"cannot encode {type(value).__name__}")
    return json.dumps(report, indent=2, default=encode)
