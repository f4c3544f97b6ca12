"""Batch front door: JSON job in, JSON report out.

One job per invocation, no daemon.  Subcommands mirror the pipelines:
normalize, majorant, diophantine, ninepoints, homology, density, twoform.
Series are encoded as lists of [a, b, re, im] monomial records, Laurent
coefficients as [k, re, im]; complex numbers are never strings.  Angles are
accepted as {"theta": x} or {"cf": [...]}; cf is preferred and noted.

Exit codes: 0 ok, 1 input error (malformed JSON, schema violation),
2 mathematical failure (torsion/resonance, domination or certificate
failure).  Reports are byte-stable across runs: timing goes to stderr,
never into the report.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .diophantine import (
    DiophantineAngle,
    UnitCircleConstant,
    check_certificate,
    small_divisor,
)
from .errors import CyclenfError, TorsionError
from .geometry import (
    NinePointConfig,
    h1_mapping_torus,
    nine_point_t,
    orbit_density,
)
from .majorant import solve_majorant
from .normalform import (
    CycleGluingData,
    NodeGluingData,
    normalize_cycle,
    normalize_node,
    two_form_factor,
)
from .series import TruncatedSeries2

COMMANDS = (
    "normalize",
    "majorant",
    "diophantine",
    "ninepoints",
    "homology",
    "density",
    "twoform",
)

# hand-rolled schema: {field: (required, type description)} per command
SCHEMA = {
    "job": {
        "command": (True, "one of " + ", ".join(COMMANDS)),
        "input": (True, "object, command-specific payload"),
        "order": (False, "int, truncation order (normalize/majorant/twoform)"),
        "tol": (False, "float, acceptance tolerance echoed in the report"),
        "output": (False, "string, path of the report file"),
    },
    "normalize": {
        "kind": (True, "'node' or 'cycle'"),
        "t": (False, "[re, im] or {'theta': x} or {'cf': [...]} (node)"),
        "G": (False, "[[a, b, re, im], ...] unit series (node)"),
        "t_edges": (False, "list of [re, im] or angle objects (cycle)"),
        "G_edges": (False, "list of series encodings (cycle)"),
    },
    "majorant": {
        "K": (True, "float > 0"),
        "R": (True, "float > 1"),
        "M": (True, "float > 1"),
        "angle": (True, "{'theta': x} or {'cf': [...]}"),
    },
    "diophantine": {
        "angle": (True, "{'theta': x} or {'cf': [...]}"),
        "A": (True, "float > 0"),
        "alpha": (True, "float > 0"),
        "n_max": (True, "int >= 1"),
    },
    "ninepoints": {
        "params": (True, "nine [re, im] pairs"),
        "n_components": (False, "1, 2 or 3 (default 1)"),
    },
    "homology": {"n": (True, "int >= 1")},
    "density": {
        "angle": (True, "{'theta': x} or {'cf': [...]}"),
        "eps_net": (True, "float > 0"),
        "max_iter": (False, "int (default 100000)"),
    },
    "twoform": {
        "t": (False, "[re, im], default [1, 0]"),
        "G": (True, "[[a, b, re, im], ...] unit series"),
    },
}


class InputError(ValueError):
    pass


def _require_fields(obj, schema, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    for key in obj:
        if key not in schema:
            raise InputError(f"{where}: unknown field {key!r}")
    for key, (required, _) in schema.items():
        if required and key not in obj:
            raise InputError(f"{where}: missing required field {key!r}")


def _decode_angle(obj, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: angle must be an object")
    if "cf" in obj:
        return DiophantineAngle.from_cf(obj["cf"]), "cf"
    if "theta" in obj:
        return DiophantineAngle.from_theta(float(obj["theta"])), "theta"
    raise InputError(f"{where}: angle needs 'theta' or 'cf'")


def _decode_unit(obj, where):
    if isinstance(obj, list) and len(obj) == 2:
        return complex(obj[0], obj[1])
    if isinstance(obj, dict):
        angle, _ = _decode_angle(obj, where)
        return UnitCircleConstant.from_angle(angle).t
    raise InputError(f"{where}: expected [re, im] or an angle object")


def _decode_series(records, order, where):
    if not isinstance(records, list):
        raise InputError(f"{where}: series must be a list of [a, b, re, im]")
    try:
        monomials = [(int(a), int(b), complex(re, im)) for a, b, re, im in records]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: bad monomial record ({exc})") from exc
    if order is None:
        order = max((max(a, b) for a, b, _ in monomials), default=0)
    return TruncatedSeries2.from_monomials(monomials, order)


def _encode_series(series, tol=0.0):
    records = []
    coeffs = series.coeffs
    n = series.order
    for a in range(n + 1):
        for b in range(n + 1):
            c = coeffs[a, b]
            if abs(c) > tol:
                records.append([a, b, c.real, c.imag])
    return records


def _encode_complex(z):
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# command handlers: payload -> (status, body); raise for errors
# ---------------------------------------------------------------------------


def _run_normalize(payload, order, tol):
    _require_fields(payload, SCHEMA["normalize"], "normalize input")
    kind = payload["kind"]
    if kind == "node":
        if "t" not in payload or "G" not in payload:
            raise InputError("normalize node needs 't' and 'G'")
        t = _decode_unit(payload["t"], "t")
        G = _decode_series(payload["G"], order, "G")
        data = NodeGluingData(t=t, G=G)
        result = normalize_node(data)
        status = "ok" if result.residual <= tol else "tolerance_exceeded"
        return status, {
            "kind": "node",
            "residual": {"value": result.residual, "tol": tol},
            "divisors": result.diagnostics["divisors"],
            "certificate_label": "empirical-K",
            "h_mid_sup": result.diagnostics["sup_h_mid"],
        }
    if kind == "cycle":
        if "t_edges" not in payload or "G_edges" not in payload:
            raise InputError("normalize cycle needs 't_edges' and 'G_edges'")
        ts = [_decode_unit(t, "t_edges") for t in payload["t_edges"]]
        Gs = [_decode_series(g, order, "G_edges") for g in payload["G_edges"]]
        data = CycleGluingData(t_edges=ts, G_edges=Gs)
        result = normalize_cycle(data)
        status = "ok" if result.residual <= tol else "tolerance_exceeded"
        return status, {
            "kind": "cycle",
            "residual": {"value": result.residual, "tol": tol},
            "divisors": result.diagnostics["divisors"],
            "t_product": _encode_complex(data.t_product),
            "root_branch": _encode_complex(result.diagnostics["root_branch"]),
            "certificate_label": "empirical-K",
        }
    raise InputError(f"normalize kind must be 'node' or 'cycle', got {kind!r}")


def _run_majorant(payload, order, tol):
    _require_fields(payload, SCHEMA["majorant"], "majorant input")
    angle, how = _decode_angle(payload["angle"], "angle")
    N = order if order else 32
    series = solve_majorant(payload["K"], payload["R"], payload["M"], angle, N)
    return "ok", {
        "B_head": [float(b) for b in series.B[1 : min(9, N + 1)]],
        "radius_estimate": series.radius_estimate,
        "radius_window": list(series.radius_window),
        "label": series.label,
        "angle_given_as": how,
        "order": N,
    }


def _run_diophantine(payload, order, tol):
    _require_fields(payload, SCHEMA["diophantine"], "diophantine input")
    angle, how = _decode_angle(payload["angle"], "angle")
    report = check_certificate(angle, payload["A"], payload["alpha"], payload["n_max"])
    body = report.as_dict()
    body["angle_given_as"] = how
    body["small_divisor_head"] = [small_divisor(angle, n) for n in range(1, 9)]
    return ("ok" if report.ok else "certificate_failed"), body


def _run_ninepoints(payload, order, tol):
    _require_fields(payload, SCHEMA["ninepoints"], "ninepoints input")
    params = [complex(p[0], p[1]) for p in payload["params"]]
    config = NinePointConfig(
        n_components=payload.get("n_components", 1), params=params
    )
    result = nine_point_t(config)
    return "ok", result.as_dict()


def _run_homology(payload, order, tol):
    _require_fields(payload, SCHEMA["homology"], "homology input")
    cls = h1_mapping_torus(int(payload["n"]))
    return "ok", {
        "n": cls.n,
        "betti": cls.betti,
        "torsion": cls.torsion,
        "group": cls.group_name(),
        "monodromy": [[int(x) for x in row] for row in cls.monodromy],
    }


def _run_density(payload, order, tol):
    _require_fields(payload, SCHEMA["density"], "density input")
    angle, how = _decode_angle(payload["angle"], "angle")
    t = UnitCircleConstant.from_angle(angle).t
    result = orbit_density(t, payload["eps_net"], payload.get("max_iter", 100000))
    return ("ok" if result.dense else "not_dense"), {
        "dense": result.dense,
        "iterations": result.iterations,
        "eps_net": result.eps_net,
        "max_gap_chord": result.max_gap_chord,
        "angle_given_as": how,
    }


def _run_twoform(payload, order, tol):
    _require_fields(payload, SCHEMA["twoform"], "twoform input")
    G = _decode_series(payload["G"], order, "G")
    t = _decode_unit(payload.get("t", [1.0, 0.0]), "t")
    data = NodeGluingData(t=t, G=G)
    ratio = two_form_factor(data)
    deviation = ratio - TruncatedSeries2.constant(1.0, ratio.order)
    return "ok", {
        "ratio": _encode_series(ratio, tol=0.0),
        "is_standard": {"value": deviation.max_abs() <= tol, "tol": tol},
        "max_deviation_from_1": deviation.max_abs(),
    }


_HANDLERS = {
    "normalize": _run_normalize,
    "majorant": _run_majorant,
    "diophantine": _run_diophantine,
    "ninepoints": _run_ninepoints,
    "homology": _run_homology,
    "density": _run_density,
    "twoform": _run_twoform,
}

_MATH_FAILURE_STATUSES = {"certificate_failed", "not_dense", "tolerance_exceeded"}


def run(job):
    """Execute one JobSpec dict; returns (exit_code, report dict)."""
    _require_fields(job, SCHEMA["job"], "job")
    command = job["command"]
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    order = job.get("order")
    tol = float(job.get("tol", 1e-9))
    try:
        status, body = _HANDLERS[command](job["input"], order, tol)
    except TorsionError as exc:
        report = {
            "command": command,
            "status": "torsion",
            "error": {"order": exc.order, "divisor": exc.divisor},
            "tol": tol,
        }
        return 2, report
    report = {"command": command, "status": status, "tol": tol, "result": body}
    code = 0 if status == "ok" else 2 if status in _MATH_FAILURE_STATUSES else 2
    return code, report


def _schema_text():
    return json.dumps(SCHEMA, indent=2, sort_keys=True)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cyclenf",
        description="batch pipelines for the cycle normal-form package",
    )
    parser.add_argument("--version", action="version", version=f"cyclenf {__version__}")
    parser.add_argument(
        "--schema", action="store_true", help="print the job JSON schema and exit"
    )
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run a {name} job")
        p.add_argument("--input", required=True, help="job JSON file")
        p.add_argument("--order", type=int, default=None, help="truncation order")
        p.add_argument("--tol", type=float, default=None, help="report tolerance")
        p.add_argument("--output", default=None, help="report path (default: stdout)")

    args = parser.parse_args(argv)
    if args.schema:
        print(_schema_text())
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1

    started = time.monotonic()
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            job = json.load(fh)
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 1

    if not isinstance(job, dict):
        print("input error: job must be a JSON object", file=sys.stderr)
        return 1
    job.setdefault("command", args.command)
    if job["command"] != args.command:
        print("input error: job file command does not match the subcommand",
              file=sys.stderr)
        return 1
    for key, value in (("order", args.order), ("tol", args.tol), ("output", args.output)):
        if value is not None:
            job[key] = value

    try:
        code, report = run(job)
    except (InputError, CyclenfError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1

    text = json.dumps(report, indent=2) + "\n"
    output = job.get("output")
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    elapsed = time.monotonic() - started
    print(f"wall time: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
