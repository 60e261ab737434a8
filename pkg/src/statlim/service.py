"""FastAPI service exposing every group and quasi-isomorphism operation.

Each endpoint is a pure function of its JSON payload: matrices and
vectors arrive as arrays of integers or exact rational strings "a/b",
residues leave as decimal integers in [0, p^N) alongside (p, N).
Identical requests produce identical responses.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import List, Optional, Union

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import factor, groups, quasi
from .errors import ArgumentError, RaisePrecisionError, StatlimError
from .exact import IntMatrix, charpoly
from .padic import PNorm

Entry = Union[int, str]

MAX_PRECISION = 4096
PRECISION_ENV_VAR = "STATLIM_PRECISION"


def default_precision():
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return groups.DEFAULT_PRECISION
    try:
        return _check_precision(int(raw))
    except (ValueError, ArgumentError):
        raise ArgumentError(f"bad {PRECISION_ENV_VAR} value: {raw!r}")


def _check_precision(n):
    if not 1 <= n <= MAX_PRECISION:
        raise ArgumentError(f"precision must be in [1, {MAX_PRECISION}], got {n}")
    return n


def parse_rational(x):
    if isinstance(x, int):
        return Fraction(x)
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise ArgumentError(f"cannot parse rational {x!r}")


def parse_vector(v):
    return tuple(parse_rational(x) for x in v)


def parse_rat_matrix(m):
    if not m:
        raise ArgumentError("matrix must be nonempty")
    return tuple(parse_vector(row) for row in m)


def parse_int_matrix(m):
    rows = parse_rat_matrix(m)
    out = []
    for row in rows:
        ints = []
        for x in row:
            if x.denominator != 1:
                raise ArgumentError(f"integer matrix has rational entry {x}")
            ints.append(int(x))
        out.append(ints)
    return IntMatrix.from_rows(out)


def format_rational(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def format_vector(v):
    return [format_rational(x) for x in v]


def format_matrix(m):
    return [format_vector(row) for row in m]


def _presentation(matrix):
    return groups.StationaryPresentation(parse_int_matrix(matrix))


def _norm_payload(norm: PNorm):
    return {"token": str(norm), "exponent": norm.exponent, "capped": norm.capped}


def _module_payload(module):
    return {
        "basis": [list(row) for row in module.basis],
        "pivot_columns": list(module.pivot_cols),
        "pivot_valuations": list(module.pivot_vals),
        "rank": module.rank,
    }


# ---- request / response models ----


class CharpolyRequest(BaseModel):
    matrix: List[List[Entry]]


class CharpolyResponse(BaseModel):
    coefficients: List[int]


class DivisibleRequest(BaseModel):
    matrix: List[List[Entry]]
    p: int
    verify: bool = False


class DivisibleResponse(BaseModel):
    divisible: bool
    witness_power: Optional[int] = None
    verify: Optional[dict] = None


class UnitSplitRequest(BaseModel):
    matrix: Optional[List[List[Entry]]] = None
    polynomial: Optional[List[int]] = None
    p: int
    N: Optional[int] = None


class UnitSplitResponse(BaseModel):
    p: int
    N: int
    k: int
    chi1: List[int]
    chi0: List[int]
    u: List[int]
    v: List[int]


class FunctionalsRequest(BaseModel):
    matrix: List[List[Entry]]
    p: int
    N: Optional[int] = None


class FunctionalsResponse(BaseModel):
    p: int
    N: int
    rank: int
    basis: List[List[int]]
    pivot_columns: List[int]
    pivot_valuations: List[int]


class DpRequest(BaseModel):
    matrix: List[List[Entry]]
    p: int
    N: Optional[int] = None
    g: List[Entry]
    h: List[Entry]
    verify: bool = False


class DpResponse(BaseModel):
    distance: str
    exponent: int
    capped: bool
    verify: Optional[dict] = None


class MemberRequest(BaseModel):
    matrix: List[List[Entry]]
    vector: List[Entry]
    N: Optional[int] = None
    verify: bool = False


class MemberResponse(BaseModel):
    member: bool
    certificate: Optional[int] = None
    verify: Optional[dict] = None


class CorankRequest(BaseModel):
    matrix: List[List[Entry]]
    p: int


class CorankResponse(BaseModel):
    corank: int


class LimitApproxRequest(BaseModel):
    matrices: List[List[List[Entry]]]
    p: int
    N: Optional[int] = None
    stage: int


class LimitApproxResponse(BaseModel):
    p: int
    N: int
    stage: int
    basis: List[List[int]]
    pivot_columns: List[int]
    pivot_valuations: List[int]
    rank: int


class PowerCongruenceRequest(BaseModel):
    matrix: List[List[Entry]]
    m: int = Field(ge=2)


class PowerCongruenceResponse(BaseModel):
    k: int
    l: int


class AdjoinRequest(BaseModel):
    matrix: List[List[Entry]]
    vector: List[Entry]


class AdjoinResponse(BaseModel):
    matrix: List[List[int]]
    basis: List[List[Union[int, str]]]
    alpha_power: int


class QuasiRebuildRequest(BaseModel):
    h_matrix: List[List[Entry]]
    n: int = Field(ge=1)
    alpha: List[List[Entry]]
    beta: List[List[Entry]]
    reps: List[List[Entry]] = []


class QuasiRebuildResponse(BaseModel):
    matrix: List[List[int]]
    basis: List[List[Union[int, str]]]


class HealthResponse(BaseModel):
    status: str


# ---- handlers (shared by the HTTP endpoints and the CLI thin client) ----


def handle_charpoly(req: CharpolyRequest) -> CharpolyResponse:
    a = parse_int_matrix(req.matrix)
    return CharpolyResponse(coefficients=list(charpoly(a)))


def handle_divisible(req: DivisibleRequest) -> DivisibleResponse:
    pres = _presentation(req.matrix)
    divisible, witness = groups.is_p_divisible(pres, req.p)
    verify = None
    if req.verify:
        r = pres.rank
        sampled = all(
            groups.is_divisible_oracle(pres,
                                       [int(i == j) for j in range(r)], req.p)
            for i in range(r))
        verify = {"oracle_divisible": sampled, "agrees": sampled == divisible}
    return DivisibleResponse(divisible=divisible, witness_power=witness,
                             verify=verify)


def handle_unit_split(req: UnitSplitRequest) -> UnitSplitResponse:
    if (req.matrix is None) == (req.polynomial is None):
        raise ArgumentError("provide exactly one of matrix / polynomial")
    if req.matrix is not None:
        chi = charpoly(parse_int_matrix(req.matrix))
    else:
        chi = tuple(req.polynomial)
    n = _check_precision(req.N if req.N is not None else default_precision())
    split = factor.hensel_split(chi, req.p, n)
    return UnitSplitResponse(p=split.p, N=split.N, k=split.k,
                             chi1=list(split.chi1), chi0=list(split.chi0),
                             u=list(split.u), v=list(split.v))


def handle_functionals(req: FunctionalsRequest) -> FunctionalsResponse:
    n = _check_precision(req.N if req.N is not None else default_precision())
    basis = groups.functionals_basis(_presentation(req.matrix), req.p, n)
    payload = _module_payload(basis.module)
    return FunctionalsResponse(p=req.p, N=n, rank=basis.rank,
                               basis=payload["basis"],
                               pivot_columns=payload["pivot_columns"],
                               pivot_valuations=payload["pivot_valuations"])


def handle_dp(req: DpRequest) -> DpResponse:
    n = _check_precision(req.N if req.N is not None else default_precision())
    pres = _presentation(req.matrix)
    g, h = parse_vector(req.g), parse_vector(req.h)
    norm = groups.dp_distance(pres, req.p, n, g, h)
    verify = None
    if req.verify:
        oracle = groups.dp_distance_oracle(pres, req.p, n, g, h)
        verify = {"oracle": str(oracle), "agrees": oracle == norm}
    return DpResponse(distance=str(norm), exponent=norm.exponent,
                      capped=norm.capped, verify=verify)


def handle_member(req: MemberRequest) -> MemberResponse:
    n = _check_precision(req.N if req.N is not None else default_precision())
    pres = _presentation(req.matrix)
    vec = parse_vector(req.vector)
    ok, elem = groups.member(pres, vec, n)
    verify = None
    if req.verify:
        d = math.lcm(*(x.denominator for x in vec))
        bound = groups.certificate_bound(pres, d)
        found = groups._find_certificate(pres, vec, bound)
        verify = {"iteration_member": found is not None,
                  "agrees": (found is not None) == ok}
    return MemberResponse(member=ok,
                          certificate=elem.cert if ok else None,
                          verify=verify)


def handle_corank(req: CorankRequest) -> CorankResponse:
    return CorankResponse(corank=groups.pro_p_corank(_presentation(req.matrix), req.p))


def handle_limit_approx(req: LimitApproxRequest) -> LimitApproxResponse:
    n = _check_precision(req.N if req.N is not None else default_precision())
    prefix = groups.InductivePrefix(tuple(parse_int_matrix(m) for m in req.matrices))
    module = groups.limit_prefix_functionals(prefix, req.p, n, req.stage)
    payload = _module_payload(module)
    return LimitApproxResponse(p=req.p, N=n, stage=req.stage,
                               basis=payload["basis"],
                               pivot_columns=payload["pivot_columns"],
                               pivot_valuations=payload["pivot_valuations"],
                               rank=payload["rank"])


def handle_power_congruence(req: PowerCongruenceRequest) -> PowerCongruenceResponse:
    k, l = quasi.power_congruence(parse_int_matrix(req.matrix), req.m)
    return PowerCongruenceResponse(k=k, l=l)


def handle_adjoin(req: AdjoinRequest) -> AdjoinResponse:
    pres = _presentation(req.matrix)
    result = quasi.adjoin_element(pres, parse_vector(req.vector))
    return AdjoinResponse(
        matrix=[list(result.presentation.A.row(i))
                for i in range(result.presentation.rank)],
        basis=format_matrix(result.increasing.f_basis),
        alpha_power=result.alpha_power)


def handle_quasi_rebuild(req: QuasiRebuildRequest) -> QuasiRebuildResponse:
    h_pres = _presentation(req.h_matrix)
    data = quasi.QuasiIsoData.make(req.n, parse_rat_matrix(req.alpha),
                                   parse_rat_matrix(req.beta))
    result = quasi.quasi_to_stationary(h_pres, data,
                                       [parse_vector(z) for z in req.reps])
    return QuasiRebuildResponse(
        matrix=[list(result.presentation.A.row(i))
                for i in range(result.presentation.rank)],
        basis=format_matrix(result.increasing.f_basis))


# ---- app wiring ----

app = FastAPI(title="statlim",
              description="p-adic functionals and invariants of stationary "
                          "torsion-free abelian groups")


@app.exception_handler(StatlimError)
async def statlim_error_handler(request, exc):
    status = 422 if isinstance(exc, RaisePrecisionError) else 400
    return JSONResponse(status_code=status,
                        content={"error": {"code": exc.code, "message": str(exc)}})


@app.get("/healthz", response_model=HealthResponse)
def healthz():
    return HealthResponse(status="ok")


@app.post("/charpoly", response_model=CharpolyResponse)
def charpoly_endpoint(req: CharpolyRequest):
    return handle_charpoly(req)


@app.post("/divisible", response_model=DivisibleResponse)
def divisible_endpoint(req: DivisibleRequest):
    return handle_divisible(req)


@app.post("/unit-split", response_model=UnitSplitResponse)
def unit_split_endpoint(req: UnitSplitRequest):
    return handle_unit_split(req)


@app.post("/functionals", response_model=FunctionalsResponse)
def functionals_endpoint(req: FunctionalsRequest):
    return handle_functionals(req)


@app.post("/dp", response_model=DpResponse)
def dp_endpoint(req: DpRequest):
    return handle_dp(req)


@app.post("/member", response_model=MemberResponse)
def member_endpoint(req: MemberRequest):
    return handle_member(req)


@app.post("/corank", response_model=CorankResponse)
def corank_endpoint(req: CorankRequest):
    return handle_corank(req)


@app.post("/limit-approx", response_model=LimitApproxResponse)
def limit_approx_endpoint(req: LimitApproxRequest):
    return handle_limit_approx(req)


@app.post("/power-congruence", response_model=PowerCongruenceResponse)
def power_congruence_endpoint(req: PowerCongruenceRequest):
    return handle_power_congruence(req)


@app.post("/adjoin", response_model=AdjoinResponse)
def adjoin_endpoint(req: AdjoinRequest):
    return handle_adjoin(req)


@app.post("/quasi-rebuild", response_model=QuasiRebuildResponse)
def quasi_rebuild_endpoint(req: QuasiRebuildRequest):
    return handle_quasi_rebuild(req)
