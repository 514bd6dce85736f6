"""``qinfo`` command-line front end.

Exit status: 0 on success, 2 on invalid input (flags, files), 1 when a
numerical consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import cloning, commsim, ensembles, geometry, information, papertable, subsystems
from .hilbert import MeasurementBasis
from .sampling import RandomStream, sample_basis

EXIT_OK, EXIT_NUMERIC, EXIT_INVALID = 0, 1, 2
RECORD_FIELDS = ("quantity", "dim", "value_bits", "value", "stderr_bits", "method")


class InputError(Exception):
    pass


class ConsistencyError(Exception):
    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _seed(text: str) -> int:
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"seed must be a decimal unsigned 64-bit integer, got {text!r}")
    n = int(text)
    if n >= 2**64:
        raise argparse.ArgumentTypeError("seed exceeds 64 bits")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(x) or x <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _dims(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("dims must look like A,B")
    return _positive_int(parts[0]), _positive_int(parts[1])


def _round_floats(obj, digits: int):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(f"{x:.{digits}g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def _record(quantity: str, dim, *, value_bits=None, value=None, stderr_bits=None, method="closed") -> dict:
    rec = {"quantity": quantity, "dim": dim, "value_bits": value_bits, "value": value,
           "stderr_bits": stderr_bits, "method": method}
    return {k: v for k, v in rec.items() if v is not None}


def _records_table(records: list[dict]):
    return list(RECORD_FIELDS), [[r.get(f, "") for f in RECORD_FIELDS] for r in records]


def _counts_table(jc: commsim.JointCounts):
    rows = [[j, n, int(jc.counts[j, n])] for j in range(jc.rows) for n in range(jc.cols)]
    return ["input", "outcome", "count"], rows


def _write_csv(table, digits: int) -> str:
    header, rows = table
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(_round_floats(rows, digits))
    return buf.getvalue()


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load(fn, data, what: str):
    try:
        return fn(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"invalid {what}: {exc}") from exc


# -- subcommands --------------------------------------------------------------
# Each returns (json_payload, csv_table) with csv_table = (header, rows).

def cmd_volumes(args):
    d = args.dim
    recs = [_record("projective_volume", d, value=geometry.projective_volume(d))]
    if d >= 2:
        recs.append(_record("sphere_area", d, value=geometry.sphere_area(d)))
    if args.phi is not None:
        spec = geometry.QuantumResolutionSpec(d, args.phi)
        recs.append(_record("resolution_volume", d, value=geometry.resolution_volume(spec)))
        recs.append(_record("resolution_fraction", d, value=geometry.resolution_fraction(spec)))
    return recs, _records_table(recs)


def cmd_microstates(args):
    if args.classical:
        if args.dof is None or args.area_ratio is None:
            raise InputError("--classical needs --dof and --area-ratio")
        if args.area_ratio < 1:
            raise InputError("--area-ratio must be at least 1")
        spec = geometry.PhaseSpaceSpec(args.dof, args.area_ratio, 1.0)
        recs = [_record("classical_microstate_bits", None, value_bits=geometry.classical_microstate_bits(spec))]
        return recs, _records_table(recs)
    if args.dim is None or args.phi is None:
        raise InputError("microstates needs --dim and --phi (or --classical)")
    spec = geometry.QuantumResolutionSpec(args.dim, args.phi)
    recs = [
        _record("quantum_microstate_bits", args.dim, value_bits=geometry.quantum_microstate_bits(spec)),
        _record("bits_per_amplitude", args.dim, value_bits=geometry.bits_per_amplitude(args.phi)),
        _record("resolution_angle_deg", args.dim, value=math.degrees(args.phi)),
    ]
    if args.dim >= 2:
        recs.append(_record("classical_equivalent_bits", args.dim, value_bits=math.log2(args.dim)))
    return recs, _records_table(recs)


def cmd_entropy(args):
    e = _load(ensembles.ensemble_from_dict, _load_json(args.ensemble), "ensemble")
    rep = information.info_report(e, context=args.ensemble)
    recs = [
        _record("I", e.dim, value_bits=rep.preparation_bits),
        _record("S", e.dim, value_bits=rep.entropy_bits),
        _record("I_minus_S", e.dim, value_bits=rep.gap_bits),
    ]
    return recs, _records_table(recs)


def cmd_avg_info(args):
    d = args.dim
    if d < 2:
        raise InputError("--dim must be at least 2")
    recs = [_record("Hbar", d, value_bits=information.mean_measurement_info_closed(d))]
    if args.mc:
        if args.samples < 100:
            raise InputError("--samples must be at least 100")
        res = information.mean_measurement_info_mc(d, args.samples, RandomStream(args.seed))
        recs.append(_record("Hbar", d, value_bits=res.mc_estimate_bits,
                            stderr_bits=res.mc_stderr_bits, method="mc"))
        if not res.consistent:
            raise ConsistencyError(
                f"Monte Carlo estimate is {res.deviation_sigmas:.2f} standard errors from the closed form",
                (recs, _records_table(recs)))
    return recs, _records_table(recs)


def cmd_accessible(args):
    d = args.dim
    if d < 2:
        raise InputError("--dim must be at least 2")
    recs = [_record("J", d, value_bits=information.accessible_info_uniform(d))]
    return recs, _records_table(recs)


def _commsim_basis(spec, dim: int, seed: int) -> MeasurementBasis | None:
    if spec is None or spec == "computational":
        return MeasurementBasis.computational(dim)
    if spec == "random":
        return sample_basis(dim, RandomStream(seed, 1))
    arr = np.array([[complex(re, im) for re, im in vec] for vec in spec])
    return MeasurementBasis(arr.T)


def cmd_commsim(args):
    cfg = _load_json(args.config)
    if not isinstance(cfg, dict):
        raise InputError("commsim config must be a JSON object")
    try:
        seed = int(cfg.get("seed", 0))
        trials = cfg.get("trials")
        trials = None if trials is None else int(trials)
        ens = cfg.get("ensemble", "uniform")
        if trials is not None and trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid commsim config: {exc}") from exc

    rng = RandomStream(seed)
    counts = None
    if ens == "uniform":
        dim = _load(lambda c: int(c["dim"]), cfg, "commsim config")
        if dim < 2 or trials is None or trials < 100:
            raise InputError("uniform experiment needs dim >= 2 and trials >= 100")
        basis = _load(lambda c: _commsim_basis(c.get("basis"), dim, seed), cfg, "basis")
        report = commsim.uniform_ensemble_experiment(dim, trials, rng, basis=basis)
        if not commsim.report_consistent(report):
            raise ConsistencyError("Monte Carlo accessible information disagrees with the closed form",
                                   ({"report": report.to_dict()}, None))
    elif isinstance(ens, dict) and "cells" in ens:
        e = _load(lambda c: ensembles.ClassicalEnsemble(int(c["cells"]), c["probs"]), ens, "classical ensemble")
        if trials is None:
            report = commsim.classical_channel_experiment(e, None)
        else:
            report = commsim.classical_channel_experiment(e, trials, rng)
    elif isinstance(ens, dict):
        e = _load(ensembles.ensemble_from_dict, ens, "ensemble")
        basis = _load(lambda c: _commsim_basis(c.get("basis"), e.dim, seed), cfg, "basis")
        if trials is None:
            report = commsim.channel_report(e, basis)
        else:
            jc = commsim.simulate_channel(e, basis, trials, rng)
            s_bits = information.von_neumann_entropy(ensembles.density_operator(e))
            report = commsim.report_from_counts(jc, vn_entropy_bits=s_bits)
            counts = jc
    else:
        raise InputError("ensemble must be 'uniform' or an ensemble object")

    payload = {"report": report.to_dict()}
    if counts is not None:
        payload["counts"] = counts.counts.tolist()
        if args.counts_csv:
            with open(args.counts_csv, "w") as fh:
                fh.write(counts.to_csv())
    if counts is not None:
        table = _counts_table(counts)
    else:
        rd = report.to_dict()
        table = (list(rd), [list(rd.values())])
    return payload, table


def cmd_clone_check(args):
    e = _load(ensembles.ensemble_from_dict, _load_json(args.ensemble), "ensemble")
    check = cloning.apparatus_clonability_check if args.apparatus else cloning.clonability_check
    verdict = check(e, args.copies, args.tol)
    rows = [[v.j, v.k, v.overlap, v.violation] for v in verdict.violating_pairs]
    return verdict.to_dict(), (["j", "k", "overlap", "violation"], rows)


def cmd_schmidt(args):
    psi = _load(ensembles.state_from_dict, _load_json(args.state), "state")
    da, db = args.dims
    s = _load(lambda p: subsystems.BipartiteStructure(da, db, p), psi, "bipartite split")
    res = subsystems.schmidt_decompose(s)
    lam = res.coefficients.probs
    payload = {
        "dims": [da, db],
        "coefficients": lam.tolist(),
        "rank": res.rank,
        "entanglement_entropy_bits": information.shannon_info(res.coefficients),
        "basis_a": [[[float(z.real), float(z.imag)] for z in col] for col in res.basis_a.T],
        "basis_b": [[[float(z.real), float(z.imag)] for z in col] for col in res.basis_b.T],
    }
    return payload, (["m", "lambda"], [[m, x] for m, x in enumerate(lam)])


def cmd_paper_table(args):
    gates = papertable.run_all()
    payload = {"passed": all(g.passed for g in gates), "gates": [g.to_dict() for g in gates]}
    table = (["gate", "passed"], [[g.name, g.passed] for g in gates])
    if not payload["passed"]:
        raise ConsistencyError("paper-table gates failed", (payload, table))
    return payload, table


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write here instead of standard output")
    common.add_argument("--full-precision", action="store_true",
                        help="emit floats with 12 significant digits instead of 6")

    p = argparse.ArgumentParser(prog="qinfo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("volumes", parents=[common], help="projective-space volumes")
    s.add_argument("--dim", type=_positive_int, required=True)
    s.add_argument("--phi", type=_positive_float, help="resolution angle in radians")
    s.set_defaults(func=cmd_volumes)

    s = sub.add_parser("microstates", parents=[common], help="microstate counts in bits")
    s.add_argument("--dim", type=_positive_int)
    s.add_argument("--phi", type=_positive_float)
    s.add_argument("--classical", action="store_true")
    s.add_argument("--dof", type=_positive_int)
    s.add_argument("--area-ratio", type=_positive_float)
    s.set_defaults(func=cmd_microstates)

    s = sub.add_parser("entropy", parents=[common], help="preparation information and entropy")
    s.add_argument("--ensemble", required=True)
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("avg-info", parents=[common], help="average measurement information")
    s.add_argument("--dim", type=_positive_int, required=True)
    s.add_argument("--mc", action="store_true")
    s.add_argument("--samples", type=_positive_int, default=100_000)
    s.add_argument("--seed", type=_seed, default=0)
    s.set_defaults(func=cmd_avg_info)

    s = sub.add_parser("accessible", parents=[common], help="accessible information, uniform ensemble")
    s.add_argument("--dim", type=_positive_int, required=True)
    s.set_defaults(func=cmd_accessible)

    s = sub.add_parser("commsim", parents=[common], help="prepare-and-measure simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--counts-csv", help="also write joint counts as CSV")
    s.set_defaults(func=cmd_commsim)

    s = sub.add_parser("clone-check", parents=[common], help="no-cloning criterion")
    s.add_argument("--ensemble", required=True)
    s.add_argument("--copies", type=_positive_int, default=1)
    s.add_argument("--tol", type=_positive_float, default=cloning.DEFAULT_TOL)
    s.add_argument("--apparatus", action="store_true", help="allow a measuring apparatus")
    s.set_defaults(func=cmd_clone_check)

    s = sub.add_parser("schmidt", parents=[common], help="Schmidt decomposition")
    s.add_argument("--state", required=True)
    s.add_argument("--dims", type=_dims, required=True)
    s.set_defaults(func=cmd_schmidt)

    s = sub.add_parser("paper-table", parents=[common], help="reproduce all headline numbers")
    s.set_defaults(func=cmd_paper_table)
    return p


def _emit(args, payload, table) -> None:
    digits = 12 if args.full_precision or args.command == "paper-table" else 6
    if args.format == "csv" and table is not None:
        out = _write_csv(table, digits)
    else:
        out = json.dumps(_round_floats(payload, digits), indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, table = args.func(args)
    except InputError as exc:
        print(f"qinfo: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConsistencyError as exc:
        if exc.payload is not None:
            _emit(args, *exc.payload)
        print(f"qinfo: consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ensembles.NumericalFailure as exc:
        print(f"qinfo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"qinfo: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, payload, table)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
