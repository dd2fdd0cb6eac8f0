"""Model files, suite orchestration and machine-readable reports.

A model file is JSON text.  Scalar coefficients are strings in the expression
grammar of :mod:`dynhopf.expr`; ℏ-tables are lists of terms
``{"order": n, "coeff": "<expr>", "left": [...], "right": [...]}`` whose
factor lists hold ``"d<i>"`` (coordinate fields) or g-basis labels, multiplied
left to right.  See ``models/`` for complete examples.
"""
from __future__ import annotations

import csv
import io
import json
import json.scanner
import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import expr as _expr
from .classical_limit import (DeformationData, coboundary_agreement, default_functions,
                              dynamical_corollary_check, lambda_bar, limit_axiom_suite)
from .cochain import alt_two_cocycle, partial
from .dyn_exterior import (Multivector, ambient, cdybe_residual, coth_r, prolong_lambda, r_matroid_residual,
                           zero_weight_residual as r_zero_weight)
from .dyn_twist import (DynamicalR, NotZeroWeight, WeightModule, build_theta, is_zero_weight, make_dynamical_twistor,
                        qdybe_residual, shifted_cocycle_residual, twisted_base_residual)
from .expr import ParseError
from .hopf_kernel import (HopfModel, TensorElement, TruncationConfig, TwistedStructures, cocycle_residual,
                          counit_twist_residual, moyal_twist, multiply)
from .library import cross_validate, rational_shifted_cocycle
from .lie_core import LieAlgebra, LieError, build_algebra, build_sl2, build_sln, jacobi_residual
from .sampling import DEFAULT_BOX, env_of, sample_points
from .scalar import PoleError, ScalarFunction
from .series import HbarSeries

SUITES = ("lie", "cdybe", "twist", "dynamical", "limit", "cochain")


class ValidationError(ValueError):
    """A well-formed model that violates a structural invariant."""

    def __init__(self, msg: str, invariant: str, path: str = "", line: Optional[int] = None,
                 col: Optional[int] = None):
        where = f" at {path}" if path else ""
        pos = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(f"{msg}{where}{pos} [invariant: {invariant}]")
        self.msg, self.invariant, self.path, self.line, self.col = msg, invariant, path, line, col


class MissingSection(ValueError):
    def __init__(self, section: str, suite: str):
        super().__init__(f"suite {suite!r} needs the {section!r} section")
        self.section, self.suite = section, suite


# -- position-aware JSON ---------------------------------------------------

class _Str(str):
    pos = 0


class _Decoder(json.JSONDecoder):
    """JSON decoder whose string values remember their offset in the text."""

    def __init__(self):
        super().__init__()
        base = self.parse_string

        def parse_string(s, end, strict):
            val, stop = base(s, end, strict)
            out = _Str(val)
            out.pos = end
            return out, stop

        self.parse_string = parse_string
        self.scan_once = json.scanner.py_make_scanner(self)


def _linecol(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _pos_of(text: str, s) -> Tuple[Optional[int], Optional[int]]:
    if isinstance(s, _Str):
        return _linecol(text, s.pos)
    return None, None


# -- model -------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingConfig:
    count: int = 7
    seed: int = 0
    box: Tuple[Fraction, Fraction] = DEFAULT_BOX
    tol: float = 1e-9
    max_den: int = 64


@dataclass(frozen=True)
class Term:
    order: int
    coeff: ScalarFunction
    slots: Tuple[Tuple[tuple, ...], ...]


@dataclass(frozen=True)
class Table:
    """An ℏ-table or a named preset with its options."""
    terms: Tuple[Term, ...] = ()
    preset: Optional[str] = None
    options: Tuple[Tuple[str, object], ...] = ()

    def option(self, key, default=None):
        return dict(self.options).get(key, default)


@dataclass(frozen=True)
class ModelFile:
    g: LieAlgebra
    k: int
    truncation: TruncationConfig = TruncationConfig()
    sampling: SamplingConfig = SamplingConfig()
    rmatrix: Optional[Multivector] = None
    twist: Optional[Table] = None
    shifted_cocycle: Optional[Table] = None
    delta0: Optional[Tuple[Tuple[int, Table], ...]] = None
    rep: Optional[WeightModule] = None
    R0: Optional[Table] = None
    name: str = "model"

    def with_overrides(self, hbar_order=None, diff_cap=None, pbw_cap=None, samples=None, seed=None,
                       tol=None) -> "ModelFile":
        t, s = self.truncation, self.sampling
        t = TruncationConfig(t.hbar_order if hbar_order is None else hbar_order,
                             t.diff_cap if diff_cap is None else diff_cap,
                             t.pbw_cap if pbw_cap is None else pbw_cap)
        s = replace(s, count=s.count if samples is None else samples, seed=s.seed if seed is None else seed,
                    tol=s.tol if tol is None else tol)
        return replace(self, truncation=t, sampling=s)

    def hopf(self) -> HopfModel:
        m = HopfModel(self.g, self.k, self.truncation)
        if self.delta0:
            m.delta0 = {idx: build_table(t, m, 2) for idx, t in self.delta0}
        return m

    def points(self, avoid: Sequence[ScalarFunction] = ()) -> List[List[Fraction]]:
        s = self.sampling
        return sample_points(self.k, s.count, s.seed, s.box, s.max_den, avoid=avoid)


def build_table(t: Table, m: HopfModel, arity: int = 2) -> TensorElement:
    """Realise a parsed table (or preset) as an element of the given model."""
    if t.preset == "identity":
        return m.one(arity)
    if t.preset == "theta":
        return build_theta(m, t.option("variant", "normal"))
    if t.preset == "moyal":
        return moyal_twist(m, t.option("i", 1), t.option("j", 2), t.option("scale", 1))
    if t.preset == "rational_sl2":
        return rational_shifted_cocycle(m, t.option("shift", 0))
    raw = []
    for term in t.terms:
        if len(term.slots) != arity:
            raise ValidationError(f"term has {len(term.slots)} legs, expected {arity}", "table arity")
        raw.append((term.order, term.coeff, term.slots))
    return m.normalize(raw, arity)


class _Reader:
    def __init__(self, text: str, params: Mapping[str, Fraction]):
        self.text = text
        self.params = params

    def fail(self, msg: str, invariant: str, path: str, node=None) -> ValidationError:
        line, col = _pos_of(self.text, node)
        return ValidationError(msg, invariant, path, line, col)

    def rational(self, v, path: str) -> Fraction:
        try:
            if isinstance(v, bool):
                raise ValueError
            return Fraction(str(v))
        except (ValueError, ZeroDivisionError):
            raise self.fail(f"expected a rational number, got {v!r}", "rational literal", path, v) from None

    def integer(self, v, path: str, lo: int = 0) -> int:
        if isinstance(v, bool) or not isinstance(v, int) or v < lo:
            raise self.fail(f"expected an integer >= {lo}, got {v!r}", "integer field", path, v)
        return v

    def scalar(self, v, path: str) -> ScalarFunction:
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return ScalarFunction.const(self.rational(v, path))
        if not isinstance(v, str):
            raise self.fail(f"expected an expression string, got {v!r}", "expression field", path, v)
        try:
            node = _expr.parse(v)
        except ParseError as e:
            line, col = _pos_of(self.text, v)
            if line is None:
                raise
            # expression strings are single-line; shift by the string's own column
            raise ParseError(e.msg, line, col + e.col - 1) from None
        node = self._bind(node, path, v)
        try:
            return _expr.to_scalar(node)
        except (ValueError, ZeroDivisionError) as e:
            raise self.fail(str(e), "expression class (rational-exponential)", path, v) from None

    def _bind(self, node, path, raw):
        E = _expr
        if isinstance(node, E.Param):
            if node.name not in self.params:
                raise self.fail(f"unbound parameter {node.name!r}", "parameters are declared in 'params'",
                                path, raw)
            return E.Num(self.params[node.name])
        if isinstance(node, E.Neg):
            return E.Neg(self._bind(node.operand, path, raw))
        if isinstance(node, E.BinOp):
            return E.BinOp(node.op, self._bind(node.left, path, raw), self._bind(node.right, path, raw))
        if isinstance(node, E.Pow):
            return E.Pow(self._bind(node.base, path, raw), node.exponent)
        if isinstance(node, E.Func):
            return E.Func(node.name, self._bind(node.arg, path, raw))
        return node


def _algebra(rd: _Reader, sec, path="algebra") -> LieAlgebra:
    if not isinstance(sec, dict):
        raise rd.fail("algebra must be an object", "section shape", path)
    try:
        if "sl" in sec:
            n = rd.integer(sec["sl"], path + ".sl", 2)
            scale = sec.get("root_scale", "matrix")
            return build_sl2(scale) if n == 2 else build_sln(n, scale)
        dim = rd.integer(sec.get("dim"), path + ".dim", 1)
        labels = sec.get("labels") or [f"x{i}" for i in range(dim)]
        if len(labels) != dim or len(set(labels)) != dim:
            raise rd.fail("labels must be distinct and match dim", "basis labels", path + ".labels")
        index = {str(lab): i for i, lab in enumerate(labels)}

        def idx(v, p):
            if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < dim:
                return v
            if isinstance(v, str) and v in index:
                return index[v]
            raise rd.fail(f"unknown basis element {v!r}", "basis labels", p, v)

        structure: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for n, br in enumerate(sec.get("brackets", [])):
            p = f"{path}.brackets[{n}]"
            a, b = idx(br.get("x"), p + ".x"), idx(br.get("y"), p + ".y")
            row = {idx(key, p + ".value"): rd.rational(val, p + ".value") for key, val in br.get("value", {}).items()}
            structure[(a, b)] = row
        cartan = [idx(c, path + ".cartan") for c in sec.get("cartan", [])]
        return build_algebra(dim, structure, cartan, labels)
    except LieError as e:
        raise ValidationError(str(e), f"{type(e).__name__} (lie_core.build_algebra)", path) from None


def _factor(rd: _Reader, g: LieAlgebra, k: int, v, path: str) -> tuple:
    if isinstance(v, str):
        if v in g.basis_labels:
            return ("x", g.index(v))
        if len(v) > 1 and v[0] == "d" and v[1:].isdigit():
            i = int(v[1:])
            if 1 <= i <= k:
                return ("d", i)
            raise rd.fail(f"coordinate field {v} outside 1..{k}", "lambda_dim", path, v)
    raise rd.fail(f"unknown factor {v!r}", "factors are d<i> or g-basis labels", path, v)


def _table(rd: _Reader, g: LieAlgebra, k: int, sec, path: str, presets: Sequence[str]) -> Table:
    if isinstance(sec, dict) and "preset" in sec:
        name = sec["preset"]
        if name not in presets:
            raise rd.fail(f"unknown preset {name!r}; expected one of {sorted(presets)}", "preset name",
                          path + ".preset", name)
        opts = []
        for key, val in sorted(sec.items()):
            if key == "preset":
                continue
            if key in ("shift", "scale"):
                val = rd.rational(val, f"{path}.{key}")
            opts.append((key, val))
        return Table(preset=str(name), options=tuple(opts))
    terms_in = sec.get("terms") if isinstance(sec, dict) else sec
    if not isinstance(terms_in, list):
        raise rd.fail("expected a list of terms or a preset", "section shape", path)
    terms = []
    for n, t in enumerate(terms_in):
        p = f"{path}[{n}]"
        if not isinstance(t, dict):
            raise rd.fail("a term is an object", "section shape", p)
        order = rd.integer(t.get("order", 0), p + ".order")
        coeff = rd.scalar(t.get("coeff", "1"), p + ".coeff")
        if "slots" in t:
            legs = t["slots"]
        else:
            legs = [t.get("left", []), t.get("right", [])]
        slots = tuple(tuple(_factor(rd, g, k, f, f"{p}.slot{s}") for f in leg) for s, leg in enumerate(legs))
        terms.append(Term(order, coeff, slots))
    return Table(terms=tuple(terms))


def _rmatrix(rd: _Reader, g: LieAlgebra, k: int, sec, path="rmatrix") -> Multivector:
    amb = ambient(g, k)
    if isinstance(sec, dict) and "preset" in sec:
        if sec["preset"] != "coth":
            raise rd.fail(f"unknown rmatrix preset {sec['preset']!r}", "preset name", path, sec["preset"])
        try:
            return coth_r(g, sec.get("form", "killing"), sec.get("normalize", True), k)
        except (LieError, ValueError) as e:
            raise ValidationError(str(e), "root data and invariant form", path) from None
    if not isinstance(sec, list):
        raise rd.fail("expected a list of {coeff, i, j} or a preset", "section shape", path)
    raw = []
    for n, t in enumerate(sec):
        p = f"{path}[{n}]"
        legs = []
        for key in ("i", "j"):
            f = _factor(rd, g, k, t.get(key), f"{p}.{key}")
            if f[0] != "x":
                raise rd.fail("r-matrix legs lie in g", "r(λ) takes values in ∧²g", f"{p}.{key}", t.get(key))
            legs.append(amb.lie_gen(f[1]))
        raw.append((rd.scalar(t.get("coeff", "1"), p + ".coeff"), tuple(legs)))
    return Multivector.from_raw(amb, raw)


def _rep(rd: _Reader, g: LieAlgebra, sec, path="rep") -> WeightModule:
    try:
        if isinstance(sec, dict) and sec.get("preset") == "fundamental":
            n = round((g.dim + 1) ** 0.5)
            if n * n - 1 != g.dim or not g.root_data:
                raise ValidationError("the fundamental preset needs an sl_n algebra", "sl_n algebra", path)
            return WeightModule.fundamental(g, n)
        mats = sec.get("matrices") if isinstance(sec, dict) else None
        if not isinstance(mats, dict):
            raise rd.fail("expected {'preset': 'fundamental'} or {'matrices': {...}}", "section shape", path)
        action = {}
        for lab, M in mats.items():
            if lab not in g.basis_labels:
                raise rd.fail(f"unknown basis element {lab!r}", "basis labels", path + ".matrices")
            action[g.index(lab)] = [[rd.rational(v, f"{path}.matrices.{lab}") for v in row] for row in M]
        if sorted(action) != list(range(g.dim)):
            raise rd.fail("every basis element needs a matrix", "complete action", path + ".matrices")
        return WeightModule(g, action)
    except ValidationError:
        raise
    except (ValueError, KeyError, IndexError, TypeError) as e:
        raise ValidationError(str(e), "weight-module structure", path) from None


def parse_model(text: str, name: str = "model") -> ModelFile:
    """Parse and validate a model file."""
    try:
        doc = json.loads(text, cls=_Decoder)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("top level must be an object", "section shape")
    if "algebra" not in doc:
        raise MissingSection("algebra", "any")
    params = {}
    for key, val in (doc.get("params") or {}).items():
        params[str(key)] = Fraction(str(val))
    rd = _Reader(text, params)
    g = _algebra(rd, doc["algebra"])
    rank = len(g.cartan_indices)
    k = rd.integer(doc.get("lambda_dim", rank), "lambda_dim", 0)
    if k > rank:
        raise ValidationError(f"lambda_dim {k} exceeds the Cartan rank {rank}", "k <= dim η", "lambda_dim")
    tr = doc.get("truncation", {})
    try:
        trunc = TruncationConfig(**{key: rd.integer(tr[key], f"truncation.{key}")
                                    for key in ("hbar_order", "diff_cap", "pbw_cap") if key in tr})
    except ValueError as e:
        raise ValidationError(str(e), "truncation caps", "truncation") from None
    sm = doc.get("sampling", {})
    samp = SamplingConfig()
    if sm:
        box = sm.get("box")
        samp = SamplingConfig(
            count=rd.integer(sm.get("count", samp.count), "sampling.count", 1),
            seed=rd.integer(sm.get("seed", samp.seed), "sampling.seed"),
            box=(rd.rational(box[0], "sampling.box"), rd.rational(box[1], "sampling.box")) if box else samp.box,
            tol=float(sm.get("tol", samp.tol)),
            max_den=rd.integer(sm.get("max_den", samp.max_den), "sampling.max_den", 1))
        if samp.box[0] >= samp.box[1]:
            raise ValidationError("empty sampling box", "box lower < upper", "sampling.box")
    fields = dict(g=g, k=k, truncation=trunc, sampling=samp, name=name)
    if "rmatrix" in doc:
        fields["rmatrix"] = _rmatrix(rd, g, k, doc["rmatrix"])
    if "twist" in doc:
        fields["twist"] = _table(rd, g, k, doc["twist"], "twist", ("theta", "moyal", "identity"))
    if "shifted_cocycle" in doc:
        t = _table(rd, g, k, doc["shifted_cocycle"], "shifted_cocycle", ("rational_sl2", "identity"))
        if any(f[0] == "d" for term in t.terms for leg in term.slots for f in leg):
            raise ValidationError("a shifted cocycle lives in U(g)⊗U(g)", "no coordinate fields",
                                  "shifted_cocycle")
        fields["shifted_cocycle"] = t
    if "delta0" in doc:
        d0 = []
        for lab, sec in sorted(doc["delta0"].items()):
            if lab not in g.basis_labels:
                raise rd.fail(f"unknown basis element {lab!r}", "basis labels", "delta0")
            d0.append((g.index(lab), _table(rd, g, k, sec, f"delta0.{lab}", ("identity",))))
        fields["delta0"] = tuple(d0)
    if "rep" in doc:
        fields["rep"] = _rep(rd, g, doc["rep"])
    if "R0" in doc:
        fields["R0"] = _table(rd, g, k, doc["R0"], "R0", ("identity",))
    return ModelFile(**fields)


def load_model(path: str) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), name=path.rsplit("/", 1)[-1])


# -- reports -----------------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    anchor: str
    status: str
    residual_norm: Optional[float]
    hbar_order_of_first_failure: Optional[int]
    samples_used: int
    detail: str = ""


@dataclass
class Report:
    model: str = ""
    suite: str = ""
    seed: int = 0
    k: int = 0
    records: List[CheckRecord] = field(default_factory=list)
    rows: List[Tuple[Tuple[str, ...], str, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def record(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"model": self.model, "suite": self.suite, "seed": self.seed, "k": self.k,
                "records": [asdict(r) for r in self.records],
                "samples": [{"lambda": list(p), "check": c, "residual": v} for p, c, v in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def from_json(text: str) -> "Report":
        d = json.loads(text)
        return Report(d.get("model", ""), d.get("suite", ""), d.get("seed", 0), d.get("k", 0),
                      [CheckRecord(**r) for r in d.get("records", [])],
                      [(tuple(s["lambda"]), s["check"], s["residual"]) for s in d.get("samples", [])])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow([f"l{i + 1}" for i in range(self.k)] + ["check", "residual"])
        for p, c, v in self.rows:
            w.writerow(list(p) + [c, repr(v)])
        return buf.getvalue()


def emit(report: Report, json_path: Optional[str] = None, csv_path: Optional[str] = None) -> None:
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())


# -- checks ------------------------------------------------------------------

@dataclass
class Outcome:
    ok: bool
    norm: Optional[float] = 0.0
    order: Optional[int] = None
    samples: int = 0
    truncated: bool = False
    detail: str = ""
    rows: List[Tuple[List[Fraction], float]] = field(default_factory=list)


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    anchor: str
    needs: Tuple[str, ...]
    run: Callable[["_Ctx"], Outcome]


class _Ctx:
    """Per-run cache of the objects several checks share."""

    def __init__(self, model: ModelFile):
        self.mf = model
        self._cache: Dict[str, object] = {}

    def get(self, key: str, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def hopf(self) -> HopfModel:
        return self.get("hopf", self.mf.hopf)

    @property
    def rng(self) -> random.Random:
        return random.Random(self.mf.sampling.seed)

    def twist(self) -> TensorElement:
        return self.get("twist", lambda: build_table(self.mf.twist, self.hopf, 2))

    def shifted(self) -> TensorElement:
        return self.get("shifted", lambda: build_table(self.mf.shifted_cocycle, self.hopf, 2))

    def twistor(self) -> TensorElement:
        """The twist section if present, otherwise F·Θ from the shifted cocycle."""
        if self.mf.twist is not None:
            return self.twist()
        return self.get("FTheta", lambda: make_dynamical_twistor(self.shifted()))

    def points(self, avoid=()) -> List[List[Fraction]]:
        return self.mf.points(avoid)


def _coeffs(x) -> List[ScalarFunction]:
    if isinstance(x, HbarSeries):
        return [c for _, c in x.items()]
    if isinstance(x, TensorElement):
        return list(x.terms.values())
    if isinstance(x, Multivector):
        return list(x.terms.values())
    return [ScalarFunction.coerce(x)] if x else []


def _sample_norm(ctx: _Ctx, items: Sequence, exact_zero: bool) -> Tuple[float, List[Tuple[List[Fraction], float]]]:
    """Max |coefficient| over the λ-grid, per point."""
    coeffs = [c for x in items for c in _coeffs(x)]
    if exact_zero or not coeffs:
        pts = ctx.points()
        return 0.0, [(p, 0.0) for p in pts]
    try:
        pts = ctx.points([c for c in coeffs if c.den])
    except PoleError:
        return None, []
    rows = []
    for p in pts:
        env = env_of(p)
        rows.append((p, max(abs(c.evaluate(env)) for c in coeffs)))
    return max(v for _, v in rows), rows


def _first(xs) -> Optional[int]:
    orders = []
    for x in xs:
        if isinstance(x, TensorElement):
            o = x.first_order()
        elif isinstance(x, HbarSeries):
            o = x.first_nonzero()
        else:
            o = None
        if o is not None:
            orders.append(o)
    return min(orders) if orders else None


def _exact(ctx: _Ctx, items: Sequence, detail: str = "") -> Outcome:
    """Outcome for residuals that must vanish identically."""
    zero = all(_is_zero(x) for x in items)
    norm, rows = _sample_norm(ctx, items, zero)
    trunc = any(getattr(x, "overflow", False) for x in items)
    return Outcome(zero, norm, None if zero else _first(items), len(rows), trunc, detail, rows)


def _is_zero(x) -> bool:
    if isinstance(x, bool):
        return x
    z = getattr(x, "is_zero", None)
    return z() if callable(z) else not x


# lie -------------------------------------------------------------------------

def _lie_jacobi(ctx):
    bad = jacobi_residual(ctx.mf.g)
    return Outcome(bad is None, 0.0 if bad is None else float(max(abs(v) for v in bad[1].values())),
                   detail="" if bad is None else f"triple {bad[0]}")


def _lie_cartan(ctx):
    g = ctx.mf.g
    bad = [(a, b) for a in g.cartan_indices for b in g.cartan_indices if a < b and g.bracket_basis(a, b)]
    ok = not bad and len(g.cartan_indices) >= ctx.mf.k
    return Outcome(ok, float(len(bad)), detail=f"rank {len(g.cartan_indices)}, k {ctx.mf.k}")


# cdybe -----------------------------------------------------------------------

def _cdybe_report(ctx):
    s = ctx.mf.sampling
    return ctx.get("cdybe", lambda: cdybe_residual(ctx.mf.rmatrix, s.count, s.seed, s.tol))


def _cdybe_weight(ctx):
    return _exact(ctx, r_zero_weight(ctx.mf.rmatrix))


def _cdybe_class(ctx):
    rep = _cdybe_report(ctx)
    detail = {"triangular": "triangular (zero residual)", "dynamical": "constant residual",
              "neither": "non-constant residual"}[rep.classification]
    if rep.classification == "dynamical" and not rep.exact_constant:
        detail += " (sampled)"
    rows = []
    for p in rep.samples:
        v = rep.residual.evaluate(p)
        rows.append((p, max((abs(x) for x in v.values()), default=0.0)))
    return Outcome(rep.passed, rep.spread, samples=len(rows), detail=detail, rows=rows)


def _cdybe_invariance(ctx):
    rep = _cdybe_report(ctx)
    if rep.residual.is_zero():
        return Outcome(True, detail="residual is zero")
    if not rep.exact_constant:
        return Outcome(False, rep.spread, detail="residual is not exactly constant")
    size = max((abs(float(v)) for d in rep.invariance for v in d.values()), default=0.0)
    return Outcome(bool(rep.invariant), size, detail="ad-invariance of the constant")


def _cdybe_matroid(ctx):
    L = prolong_lambda(ctx.mf.rmatrix)
    LL, per = r_matroid_residual(L)
    out = _exact(ctx, per)
    if not out.ok and out.norm is not None and out.norm < ctx.mf.sampling.tol:
        out.ok = True
        out.detail = "zero at samples"
    out.detail = out.detail or ("[Λ,Λ] = 0" if LL.is_zero() else "[Λ,Λ] ≠ 0, invariant")
    return out


def _cdybe_cross(ctx):
    a, b = cross_validate(ctx.mf.rmatrix)
    return Outcome(a == b, detail=f"cdybe zero: {a}, [Λ,Λ] zero: {b}")


# twist -------------------------------------------------------------------------

def _twist_cocycle(ctx):
    return _exact(ctx, [cocycle_residual(ctx.twist())])


def _twist_counit(ctx):
    return _exact(ctx, list(counit_twist_residual(ctx.twist())))


def _star_assoc(ctx):
    F = ctx.twist()
    TS = TwistedStructures(F)
    N = ctx.hopf.N
    fs = default_functions(ctx.mf.k)
    res = []
    for a, b, c in [(fs[0], fs[1], fs[-1]), (fs[-1], fs[0], fs[1]), (fs[1], fs[-1], fs[0])]:
        A, B, C = (HbarSeries({0: x}, N) for x in (a, b, c))
        res.append(TS.star_series(TS.star_series(A, B), C) - TS.star_series(A, TS.star_series(B, C)))
    return _exact(ctx, res)


# dynamical -------------------------------------------------------------------------

def _dyn_weight(ctx):
    return Outcome(is_zero_weight(ctx.shifted()))


def _shifted(ctx):
    return ctx.get("shifted_res", lambda: shifted_cocycle_residual(ctx.shifted(), check_weight=False))


def _dyn_shifted(ctx):
    r = _shifted(ctx)
    out = _exact(ctx, [r.residual, *r.counit])
    return out


def _dyn_equiv(ctx):
    a = _shifted(ctx).first_order
    cF = make_dynamical_twistor(ctx.shifted())
    b = _first([cocycle_residual(cF), *counit_twist_residual(cF)])
    def say(o):
        return "never" if o is None else f"ℏ^{o}"
    return Outcome(a == b, detail=f"shifted cocycle fails at {say(a)}, F·Θ at {say(b)}")


def _dyn_base(ctx):
    res = twisted_base_residual(ctx.shifted(), default_functions(ctx.mf.k))
    return _exact(ctx, list(res.values()))


def _dyn_qdybe(ctx):
    V = ctx.mf.rep
    if V is None:
        n = round((ctx.mf.g.dim + 1) ** 0.5)
        V = WeightModule.fundamental(ctx.mf.g, n)
    m = ctx.hopf
    R0 = build_table(ctx.mf.R0, m, 2) if ctx.mf.R0 is not None else None
    try:
        R = DynamicalR.from_twist(ctx.shifted(), V, R0)
    except NotZeroWeight as e:
        return Outcome(False, detail=str(e))
    q = qdybe_residual(R)
    o = q.first_order()
    if o is None:
        return Outcome(True, samples=0)
    coeffs = list(q.terms.values())
    pts = ctx.points([c for c in coeffs if c.den])
    rows = [(p, q.max_abs_at(p)) for p in pts]
    return Outcome(False, max(v for _, v in rows), o, len(rows), rows=rows)


def _qdybe_available(mf: ModelFile) -> bool:
    if mf.rep is not None:
        return True
    n = round((mf.g.dim + 1) ** 0.5)
    return n * n - 1 == mf.g.dim and bool(mf.g.root_data)


# limit -----------------------------------------------------------------------------

def _limit_axioms(ctx):
    rep = limit_axiom_suite(DeformationData.from_twist(ctx.twistor()))
    fails = rep.failures
    return Outcome(not fails, float(len(fails)), detail=", ".join(fails) or "all axioms hold")


def _limit_coboundary(ctx):
    return _exact(ctx, list(coboundary_agreement(ctx.twistor()).values()))


def _limit_alternation(ctx):
    return Outcome(alt_two_cocycle(lambda_bar(ctx.twistor())).passed)


def _limit_corollary(ctx):
    rep = dynamical_corollary_check(ctx.shifted(), seed=ctx.mf.sampling.seed)
    return Outcome(rep.passed, rep.cdybe.spread, detail=rep.cdybe.classification)


# cochain ---------------------------------------------------------------------------

def random_element(m: HopfModel, rng: random.Random, arity: int, nterms: int = 3) -> TensorElement:
    """Sum of a few random monomial tensors with small polynomial coefficients."""
    gens = [m.d(i + 1) for i in range(m.k)] + [m.x(i) for i in range(m.g.dim)]
    l = [ScalarFunction.lam(i + 1) for i in range(m.k)]
    out = m.zero(arity)
    for _ in range(nterms):
        legs = []
        for _ in range(arity):
            leg = m.one()
            for _ in range(rng.randint(0, 2)):
                leg = multiply(leg, rng.choice(gens))
            legs.append(leg)
        c = ScalarFunction.const(rng.randint(-3, 3))
        if l:
            c = c + rng.choice(l).scale(rng.randint(-2, 2))
        out = out + m.tensor(*legs).scale(c).shift(rng.randint(0, 1))
    return out


def _cochain_dd(ctx):
    m = ctx.hopf
    rng = ctx.rng
    # cofaces stop at arity 3, so ∂∂ is taken on arity-1 inputs
    res = [partial(partial(random_element(m, rng, 1))) for _ in range(5)]
    return _exact(ctx, res)


def _cochain_alt(ctx):
    if ctx.mf.twist is None and ctx.mf.shifted_cocycle is None:
        m = ctx.hopf
        u = random_element(m, ctx.rng, 1)
        r = alt_two_cocycle(partial(u))
        return Outcome(r.passed and (r.alt is None or r.alt.is_zero()), detail="∂u has zero alternation")
    r = alt_two_cocycle(lambda_bar(ctx.twistor()))
    return Outcome(r.passed, detail=f"Alt = {r.alt}" if r.alt is not None else "not a cocycle")


CHECKS: Tuple[Check, ...] = (
    Check("lie.jacobi", "lie", "Jacobi identity of the structure constants", (), _lie_jacobi),
    Check("lie.cartan_abelian", "lie", "the Cartan subalgebra is abelian and has rank >= k", (), _lie_cartan),
    Check("cdybe.zero_weight", "cdybe", "r(λ) commutes with the Cartan action", ("rmatrix",), _cdybe_weight),
    Check("cdybe.classification", "cdybe",
          "Alt(dr) - ½[r,r] is λ-constant (dynamical) or zero (triangular)", ("rmatrix",), _cdybe_class),
    Check("cdybe.invariance", "cdybe", "the constant CDYBE value is g-invariant", ("rmatrix",), _cdybe_invariance),
    Check("cdybe.r_matroid", "cdybe",
          "[X, [Λ,Λ]] = 0 for Λ = Σ ∂_i∧h_i + r(λ): a coboundary Lie bialgebroid", ("rmatrix",), _cdybe_matroid),
    Check("cdybe.cross_validation", "cdybe",
          "CDYBE residual vanishes exactly when [Λ,Λ] does (sign conventions agree)", ("rmatrix",), _cdybe_cross),
    Check("twist.cocycle", "twist", "(Δ⊗id)F·F¹² = (id⊗Δ)F·F²³ modulo ℏ^{N+1}", ("twist",), _twist_cocycle),
    Check("twist.counit", "twist", "(ε⊗id)F = (id⊗ε)F = 1", ("twist",), _twist_counit),
    Check("twist.star_associativity", "twist", "the induced star product on the base is associative",
          ("twist",), _star_assoc),
    Check("dynamical.zero_weight", "dynamical", "F(λ) commutes with the diagonal Cartan action",
          ("shifted_cocycle",), _dyn_weight),
    Check("dynamical.shifted_cocycle", "dynamical",
          "shifted cocycle equation with the λ + ℏh⁽³⁾ Taylor shift, plus counit", ("shifted_cocycle",),
          _dyn_shifted),
    Check("dynamical.equivalence", "dynamical",
          "F is a shifted cocycle to the same ℏ-order as F·Θ is a twistor", ("shifted_cocycle",), _dyn_equiv),
    Check("dynamical.twisted_base", "dynamical",
          "for ℱ = F·Θ: α f = exp(ℏΣh_i∂_i) f, β f = f and f * g = fg", ("shifted_cocycle",), _dyn_base),
    Check("dynamical.qdybe", "dynamical",
          "R = F²¹⁻¹ R₀ F¹² satisfies the quantum dynamical Yang-Baxter equation on V⊗V⊗V",
          ("shifted_cocycle",), _dyn_qdybe),
    Check("limit.axioms", "limit", "classical limit axioms: δ on functions and sections, Poisson base, "
          "bialgebroid compatibility", ("twistor",), _limit_axioms),
    Check("limit.coboundary", "limit", "the classical limit equals [·, Λ] for Λ = Alt of the order-ℏ part",
          ("twistor",), _limit_coboundary),
    Check("limit.alternation", "limit", "the order-ℏ part of the twistor is a 2-cocycle with primitive "
          "alternation", ("twistor",), _limit_alternation),
    Check("limit.corollary", "limit", "a shifted cocycle F = 1 + ℏf + ... yields a classical dynamical "
          "r-matrix Alt f", ("shifted_cocycle",), _limit_corollary),
    Check("cochain.d_squared", "cochain", "∂∘∂ = 0 on the tensor-power complex", (), _cochain_dd),
    Check("cochain.alt", "cochain", "2-cocycles alternate to sections of ∧²A with primitive legs", (),
          _cochain_alt),
)

CHECK_INDEX = {c.name: c for c in CHECKS}


def explain(name: str) -> str:
    c = CHECK_INDEX[name]
    needs = ", ".join(c.needs) or "algebra only"
    return f"{c.name} [{c.suite}]: {c.anchor}\n  needs: {needs}"


def _has(mf: ModelFile, section: str) -> bool:
    if section == "twistor":
        return mf.twist is not None or mf.shifted_cocycle is not None
    return getattr(mf, section) is not None


def _primary_section(suite: str) -> Optional[str]:
    return {"cdybe": "rmatrix", "twist": "twist", "dynamical": "shifted_cocycle", "limit": "twistor"}.get(suite)


def run_suite(model: ModelFile, suite: str = "all") -> Report:
    """Run one suite (or every suite whose sections are present) and collect records."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if suite != "all":
        sec = _primary_section(suite)
        if sec and not _has(model, sec):
            raise MissingSection("twist or shifted_cocycle" if sec == "twistor" else sec, suite)
    ctx = _Ctx(model)
    report = Report(model.name, suite, model.sampling.seed, model.k)
    for c in CHECKS:
        if suite != "all" and c.suite != suite:
            continue
        if not all(_has(model, s) for s in c.needs):
            continue
        if c.name == "dynamical.qdybe" and not _qdybe_available(model):
            continue
        try:
            out = c.run(ctx)
        except (ArithmeticError, ValueError) as e:
            out = Outcome(False, None, detail=f"{type(e).__name__}: {e}")
        if not out.rows and model.k and out.norm is not None:
            # checks without a λ-profile contribute their (constant) residual at every grid point
            out.rows = [(p, out.norm) for p in ctx.points()]
            out.samples = out.samples or len(out.rows)
        status = "truncated" if out.truncated else ("pass" if out.ok else "fail")
        norm = None if out.norm is None else float(out.norm)
        report.records.append(CheckRecord(c.name, c.anchor, status, norm,
                                          None if out.ok else out.order, out.samples, out.detail))
        for p, v in out.rows:
            report.rows.append((tuple(str(x) for x in p), c.name, float(v)))
    report.records.sort(key=lambda r: r.name)
    report.rows.sort(key=lambda r: (r[1], [Fraction(x) for x in r[0]]))
    return report
