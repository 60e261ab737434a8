"""Command-line thin client over the service layer.

Every subcommand builds the same pydantic request the HTTP endpoint
accepts and either calls the handler in-process (default) or posts it
to a running service (`--server URL`).  One JSON document per job on
stdout; diagnostics go to stderr.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 raise-precision.
"""

from __future__ import annotations

import json
import sys

import click

from . import service
from .errors import RaisePrecisionError, StatlimError

_COMMANDS = {
    # endpoint path -> (request model, handler)
    "charpoly": (service.CharpolyRequest, service.handle_charpoly),
    "divisible": (service.DivisibleRequest, service.handle_divisible),
    "unit-split": (service.UnitSplitRequest, service.handle_unit_split),
    "functionals": (service.FunctionalsRequest, service.handle_functionals),
    "dp": (service.DpRequest, service.handle_dp),
    "member": (service.MemberRequest, service.handle_member),
    "corank": (service.CorankRequest, service.handle_corank),
    "limit-approx": (service.LimitApproxRequest, service.handle_limit_approx),
    "power-congruence": (service.PowerCongruenceRequest,
                         service.handle_power_congruence),
    "adjoin": (service.AdjoinRequest, service.handle_adjoin),
    "quasi-rebuild": (service.QuasiRebuildRequest, service.handle_quasi_rebuild),
}


def _emit(payload):
    click.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _run(endpoint, payload, server):
    """Dispatch one job, in-process or against a remote service."""
    payload = {k: v for k, v in payload.items() if v is not None}
    if server:
        import httpx

        resp = httpx.post(f"{server.rstrip('/')}/{endpoint}", json=payload,
                          timeout=60.0)
        body = resp.json()
        if resp.status_code != 200:
            _emit(body)
            err = body.get("error", {})
            sys.exit(3 if err.get("code") == "raise_precision" else 1)
        _emit(body)
        return
    model, handler = _COMMANDS[endpoint]
    try:
        result = handler(model(**payload))
    except RaisePrecisionError as exc:
        _emit({"error": {"code": exc.code, "message": str(exc)}})
        sys.exit(3)
    except StatlimError as exc:
        _emit({"error": {"code": exc.code, "message": str(exc)}})
        sys.exit(1)
    _emit(result.model_dump(exclude_none=True))


def _json_arg(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise click.UsageError(f"{what} must be valid JSON: {text!r}")


server_option = click.option("--server", default=None, metavar="URL",
                             help="Post the job to a running service instead "
                                  "of computing in-process.")
precision_option = click.option("-N", "--precision", "precision", type=int,
                                default=None,
                                help="Absolute p-adic precision (default 64, "
                                     "or STATLIM_PRECISION).")


@click.group()
def main():
    """Exact p-adic invariants of stationary torsion-free abelian groups."""


@main.command()
@click.argument("matrix")
@server_option
def charpoly(matrix, server):
    """Characteristic polynomial coefficients (leading first)."""
    _run("charpoly", {"matrix": _json_arg(matrix, "matrix")}, server)


@main.command()
@click.argument("matrix")
@click.option("-p", "prime", type=int, required=True)
@click.option("--verify", is_flag=True, help="Cross-check with the iteration oracle.")
@server_option
def divisible(matrix, prime, verify, server):
    """p-divisibility of the presented group, with a power witness."""
    _run("divisible", {"matrix": _json_arg(matrix, "matrix"), "p": prime,
                       "verify": verify}, server)


@main.command("unit-split")
@click.argument("payload")
@click.option("-p", "prime", type=int, required=True)
@precision_option
@click.option("--polynomial", is_flag=True,
              help="Treat PAYLOAD as monic coefficients instead of a matrix.")
@server_option
def unit_split(payload, prime, precision, polynomial, server):
    """Hensel split into unit/ideal root factors with Bezout data."""
    data = _json_arg(payload, "payload")
    body = {"p": prime, "N": precision}
    if polynomial:
        body["polynomial"] = data
    else:
        body["matrix"] = data
    _run("unit-split", body, server)


@main.command()
@click.argument("matrix")
@click.option("-p", "prime", type=int, required=True)
@precision_option
@server_option
def functionals(matrix, prime, precision, server):
    """Howell basis of the p-adic functional module G^{*p} mod p^N."""
    _run("functionals", {"matrix": _json_arg(matrix, "matrix"), "p": prime,
                         "N": precision}, server)


@main.command()
@click.argument("matrix")
@click.argument("g")
@click.argument("h")
@click.option("-p", "prime", type=int, required=True)
@precision_option
@click.option("--verify", is_flag=True,
              help="Cross-check with the brute-force divisibility search.")
@server_option
def dp(matrix, g, h, prime, precision, verify, server):
    """Divisibility pseudometric d_p(g, h) as a token p^-j or <=p^-N."""
    _run("dp", {"matrix": _json_arg(matrix, "matrix"), "p": prime,
                "N": precision, "g": _json_arg(g, "g"), "h": _json_arg(h, "h"),
                "verify": verify}, server)


@main.command()
@click.argument("matrix")
@click.argument("vector")
@precision_option
@click.option("--verify", is_flag=True,
              help="Cross-check with the bounded iteration oracle.")
@server_option
def member(matrix, vector, precision, verify, server):
    """Membership of a rational vector in the presented group."""
    _run("member", {"matrix": _json_arg(matrix, "matrix"),
                    "vector": _json_arg(vector, "vector"), "N": precision,
                    "verify": verify}, server)


@main.command()
@click.argument("matrix")
@click.option("-p", "prime", type=int, required=True)
@server_option
def corank(matrix, prime, server):
    """Pro-p corank: free rank of the pro-p completion."""
    _run("corank", {"matrix": _json_arg(matrix, "matrix"), "p": prime}, server)


@main.command("limit-approx")
@click.argument("matrices")
@click.option("-p", "prime", type=int, required=True)
@precision_option
@click.option("-n", "--stage", type=int, required=True)
@server_option
def limit_approx(matrices, prime, precision, stage, server):
    """Stage-n over-approximation of G^{*p} for an inductive prefix."""
    _run("limit-approx", {"matrices": _json_arg(matrices, "matrices"),
                          "p": prime, "N": precision, "stage": stage}, server)


@main.command("power-congruence")
@click.argument("matrix")
@click.option("-m", "modulus", type=int, required=True)
@server_option
def power_congruence(matrix, modulus, server):
    """First (k, l) with B^k = B^l mod m."""
    _run("power-congruence", {"matrix": _json_arg(matrix, "matrix"),
                              "m": modulus}, server)


@main.command()
@click.argument("presentation")
@click.argument("vector")
@server_option
def adjoin(presentation, vector, server):
    """Stationary presentation of the group generated by G and a vector."""
    _run("adjoin", {"matrix": _json_arg(presentation, "presentation"),
                    "vector": _json_arg(vector, "vector")}, server)


@main.command("quasi-rebuild")
@click.argument("h_matrix")
@click.argument("quasi_data")
@click.argument("reps", nargs=-1)
@server_option
def quasi_rebuild(h_matrix, quasi_data, reps, server):
    """Rebuild a stationary presentation across a quasi-isomorphism.

    QUASI_DATA is JSON {"n": ..., "alpha": [[...]], "beta": [[...]]};
    each REP is a JSON vector of coset representatives.
    """
    data = _json_arg(quasi_data, "quasi-data")
    if not isinstance(data, dict) or not {"n", "alpha", "beta"} <= set(data):
        raise click.UsageError('quasi-data needs keys "n", "alpha", "beta"')
    _run("quasi-rebuild", {"h_matrix": _json_arg(h_matrix, "H matrix"),
                           "n": data["n"], "alpha": data["alpha"],
                           "beta": data["beta"],
                           "reps": [_json_arg(z, "rep") for z in reps]}, server)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("statlim.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
