"""Batch harness: scatter / phase / asym / evolve / compare / report / verify.

Exit codes: 1 malformed input, 2 genericity violation, 3 numerical failure,
4 missing inputs for the report stage.  Identical configs produce
byte-identical outputs; there is no randomness anywhere in the pipeline.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import io as nio
from .asymptotics import q_asymptotic
from .config import ExperimentConfig
from .errors import (
    BadInput,
    GenericityViolation,
    MissingInputs,
    NonlocalNLSError,
    ValidityViolation,
    WindowExceeded,
)
from .model import connection_coefficients, jump_matrix, psi
from .pde import evolve, spectral_interpolate
from .phase import delta_boundary, phase_data
from .scattering import check_genericity, compute_scattering, exact_box_scattering
from .potentials import Potential


def _fail(exc: BaseException, code: int):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guarded(fn):
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BadInput as exc:
            _fail(exc, 1)
        except GenericityViolation as exc:
            _fail(exc, 2)
        except MissingInputs as exc:
            _fail(exc, 4)
        except (NonlocalNLSError, ArithmeticError, ValueError) as exc:
            _fail(exc, 3)
    wrapper.__name__ = fn.__name__
    return wrapper


@click.group()
@click.option("--config", "config_path", default=None, help="JSON experiment config")
@click.option("--out", "out_dir", default="out", help="output directory")
@click.option("--tol-scale", default=1.0, type=float, help="scale all tolerances")
@click.option("--threads", default=1, type=int, help="worker threads (advisory)")
@click.pass_context
def main(ctx, config_path, out_dir, tol_scale, threads):
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["out"] = Path(out_dir)
    ctx.obj["tol_scale"] = tol_scale
    ctx.obj["threads"] = threads


def _load_config(ctx) -> ExperimentConfig:
    path = ctx.obj.get("config_path")
    if not path:
        raise BadInput("--config is required for this subcommand")
    cfg = ExperimentConfig.from_json_file(path)
    cfg.tol_scale *= ctx.obj.get("tol_scale", 1.0)
    return cfg


def _outdir(ctx) -> Path:
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scatter_data(cfg: ExperimentConfig):
    return compute_scattering(cfg.potential, cfg.z_grid())


@main.command()
@click.pass_context
@_guarded
def scatter(ctx):
    """Compute scattering data; write CSV and a genericity report."""
    cfg = _load_config(ctx)
    out = _outdir(ctx)
    data = _scatter_data(cfg)
    report = check_genericity(data)
    nio.write_scattering_csv(data, out / "scattering.csv")
    nio.write_genericity_json(report, out / "genericity.json")
    click.echo(f"wrote {out / 'scattering.csv'}")
    if not report.passed:
        raise GenericityViolation("genericity report failed; see genericity.json")


@main.command()
@click.pass_context
@_guarded
def phase(ctx):
    """Phase data (nu, delta0, tail integral) for every configured ray."""
    cfg = _load_config(ctx)
    out = _outdir(ctx)
    if not cfg.rays:
        raise BadInput("config has no rays")
    data = _scatter_data(cfg)
    docs = [phase_data(data, xi).to_json_dict() for xi in cfg.rays]
    nio.write_phase_json(docs, out / "phase.json")
    click.echo(f"wrote {out / 'phase.json'}")


@main.command()
@click.option("--queries", "queries_path", required=False,
              help="JSON-lines file of {\"x\":..,\"t\":..} queries")
@click.pass_context
@_guarded
def asym(ctx, queries_path):
    """Evaluate the leading-order formula for a batch of (x, t) queries."""
    cfg = _load_config(ctx)
    out = _outdir(ctx)
    queries = []
    if queries_path:
        try:
            with open(queries_path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        doc = json.loads(line)
                        queries.append((float(doc["x"]), float(doc["t"])))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise BadInput(f"bad queries file: {exc}") from exc
    else:
        queries = [(-4.0 * xi * t, t) for xi in cfg.rays for t in cfg.times]
    if not queries:
        raise BadInput("no queries: pass --queries or configure rays and times")
    data = _scatter_data(cfg)
    rows = []
    for x, t in queries:
        try:
            ev = q_asymptotic(x, t, data, t_min=cfg.t_min)
            rows.append({
                "x": x, "t": t, "xi": ev.xi,
                "re_q": ev.q_leading.real, "im_q": ev.q_leading.imag,
                "abs_q": abs(ev.q_leading), "im_nu": ev.im_nu,
                "validity": ev.validity,
            })
        except (ValidityViolation, WindowExceeded):
            rows.append({
                "x": x, "t": t, "xi": -x / (4.0 * t),
                "re_q": float("nan"), "im_q": float("nan"),
                "abs_q": float("nan"), "im_nu": float("nan"),
                "validity": "invalid",
            })
    nio.write_asym_csv(rows, out / "asym.csv")
    click.echo(f"wrote {out / 'asym.csv'}")


@main.command(name="evolve")
@click.option("--t", "t_final", type=float, default=None,
              help="final time (default: last configured time)")
@click.option("--format", "fmt", type=click.Choice(["csv", "bin"]), default="csv")
@click.pass_context
@_guarded
def evolve_cmd(ctx, t_final, fmt):
    """Run the split-step oracle and export the final snapshot."""
    cfg = _load_config(ctx)
    out = _outdir(ctx)
    if t_final is None:
        if not cfg.times:
            raise BadInput("no final time: pass --t or configure times")
        t_final = cfg.times[-1]
    snap = evolve(cfg.potential, t_final, cfg.dt)
    if fmt == "csv":
        nio.write_snapshot_csv(snap, out / "snapshot.csv")
        click.echo(f"wrote {out / 'snapshot.csv'}")
    else:
        nio.write_snapshot_binary(snap, out / "snapshot.bin")
        click.echo(f"wrote {out / 'snapshot.bin'}")
    drift = abs(snap.nonlocal_mass - nonlocal_mass_initial(cfg.potential))
    scale = max(abs(snap.nonlocal_mass), 1e-300)
    click.echo(f"nonlocal mass drift: {drift / scale:.3e} relative")


def nonlocal_mass_initial(potential: Potential) -> complex:
    from .pde import snapshot_from_potential
    return snapshot_from_potential(potential).nonlocal_mass


@main.command()
@click.pass_context
@_guarded
def compare(ctx):
    """PDE versus asymptotics along each configured ray; fit decay exponents."""
    cfg = _load_config(ctx)
    out = _outdir(ctx)
    if not cfg.rays or not cfg.times:
        raise BadInput("compare needs both rays and times in the config")
    data = _scatter_data(cfg)
    snaps = evolve(cfg.potential, cfg.times[-1], cfg.dt, snapshot_times=cfg.times)
    rows = []
    fits = {}
    pending_failure = None
    for xi in cfg.rays:
        errs = []
        for snap in snaps:
            t = snap.t
            x = -4.0 * xi * t
            if abs(x) > 0.9 * snap.L:
                continue
            q_num = complex(spectral_interpolate(snap, [x])[0])
            try:
                ev = q_asymptotic(x, t, data, t_min=cfg.t_min)
                q_asym, validity = ev.q_leading, ev.validity
            except (ValidityViolation, WindowExceeded):
                q_asym, validity = complex("nan"), "invalid"
            except NonlocalNLSError as exc:
                # flush what we have with a failure marker, then propagate
                q_asym, validity = complex("nan"), "failed"
                pending_failure = exc
            err = abs(q_num - q_asym)
            rows.append({
                "xi": xi, "t": t,
                "re_qnum": q_num.real, "im_qnum": q_num.imag,
                "re_qasym": q_asym.real, "im_qasym": q_asym.imag,
                "abs_err": err, "validity": validity,
            })
            if validity not in ("invalid", "failed"):
                errs.append((t, err))
        if len(errs) >= 3 and all(e > 0 for _, e in errs):
            ts = np.log([t for t, _ in errs])
            es = np.log([e for _, e in errs])
            fits[str(xi)] = {
                "exponent": float(np.polyfit(ts, es, 1)[0]),
                "n_points": len(errs),
                "monotone_decreasing": all(
                    errs[i + 1][1] < errs[i][1] for i in range(len(errs) - 1)
                ),
            }
    nio.write_compare_csv(rows, out / "compare.csv")
    nio.write_fit_json(fits, out / "fits.json")
    click.echo(f"wrote {out / 'compare.csv'} and {out / 'fits.json'}")
    if pending_failure is not None:
        raise pending_failure


@main.command()
@click.pass_context
@_guarded
def report(ctx):
    """Summarize compare/scatter outputs into plot data and a text verdict."""
    out = _outdir(ctx)
    compare_path = out / "compare.csv"
    fits_path = out / "fits.json"
    if not compare_path.exists() or not fits_path.exists():
        raise MissingInputs("run `compare` first: compare.csv / fits.json missing")
    fits = json.loads(fits_path.read_text())
    lines = compare_path.read_text().strip().splitlines()
    long_rows = ["xi,t,series,value"]
    for line in lines[1:]:
        parts = line.split(",")
        xi, t = parts[0], parts[1]
        qnum = abs(complex(float(parts[2]), float(parts[3])))
        qasym = abs(complex(float(parts[4]), float(parts[5])))
        long_rows.append(f"{xi},{t},abs_qnum,{qnum!r}")
        long_rows.append(f"{xi},{t},abs_qasym,{qasym!r}")
        long_rows.append(f"{xi},{t},abs_err,{parts[6]}")
    (out / "plot_long.csv").write_text("\n".join(long_rows) + "\n")

    verdict = []
    ok = True
    for xi, fit in sorted(fits.items()):
        status = "PASS" if fit["exponent"] <= -0.65 and fit["monotone_decreasing"] else "FAIL"
        ok &= status == "PASS"
        verdict.append(
            f"[{status}] ray xi={xi}: fitted decay exponent "
            f"{fit['exponent']:.4f} (target <= -0.65), "
            f"monotone={fit['monotone_decreasing']}"
        )
    summary = {"rays": fits, "all_pass": bool(ok)}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (out / "summary.txt").write_text("\n".join(verdict) + "\n")
    click.echo("\n".join(verdict))
    if not ok:
        sys.exit(3)


@main.command()
@click.pass_context
@_guarded
def verify(ctx):
    """Spot-check the pipeline invariants on the configured potential."""
    cfg = _load_config(ctx)
    checks = []

    def record(name, value, tol):
        checks.append((name, value, tol, value <= tol))

    pot = cfg.potential
    data = _scatter_data(cfg)
    record("unimodularity |a abreve - b bbreve - 1|",
           data.unimodularity_deviation(), 1e-8 * cfg.tol_scale)
    sym_a = float(np.abs(data.a - np.conj(data.a[::-1])).max())
    record("symmetry |a(z) - conj(a(-z))|", sym_a, 1e-8 * cfg.tol_scale)
    sym_b = float(np.abs(data.b + pot.sigma * np.conj(data.b_breve[::-1])).max())
    record("symmetry |b(z) + sigma conj(bbreve(-z))|", sym_b, 1e-8 * cfg.tol_scale)
    if pot.kind == "box":
        a, b, ab, bb = exact_box_scattering(pot, data.z_grid)
        dev = max(
            float(np.abs(a - data.a).max()), float(np.abs(b - data.b).max()),
            float(np.abs(ab - data.a_breve).max()),
            float(np.abs(bb - data.b_breve).max()),
        )
        record("box oracle max deviation", dev, 1e-6 * cfg.tol_scale)
    if cfg.rays:
        xi = cfg.rays[0]
        ph = phase_data(data, xi)
        worst = 0.0
        itp_pts = np.linspace(data.z_grid[0] * 0.6, xi - 0.2, 5)
        for z0 in itp_pts:
            dp = delta_boundary(data, xi, float(z0), "plus")
            dm = delta_boundary(data, xi, float(z0), "minus")
            from .phase import _interp
            w = complex(_interp(data).w(np.asarray(z0)))
            worst = max(worst, abs(dp / dm - w) / abs(w))
        record("delta jump |delta+/delta- - (1 - r rbreve)|", worst,
               1e-6 * cfg.tol_scale)
        t_ref = cfg.times[0] if cfg.times else 40.0
        co = connection_coefficients(ph.r_xi, ph.r_breve_xi, ph.nu_at_xi,
                                     ph.delta0, xi, t_ref)
        record("beta1 beta2 - nu", abs(co.beta1 * co.beta2 - co.nu),
               1e-10 * cfg.tol_scale)
        V = jump_matrix(co)
        jr = 0.0
        for zr in (0.7, -1.3, 2.6):
            up = psi(complex(zr, 1e-9), co).Psi
            dn = psi(complex(zr, -1e-9), co).Psi
            jr = max(jr, float(np.abs(up - dn @ V).max()))
        record("model jump |Psi+ - Psi- V|", jr, 1e-6 * cfg.tol_scale)
    width = max(len(c[0]) for c in checks)
    all_ok = True
    for name, value, tol, ok in checks:
        all_ok &= ok
        click.echo(f"[{'PASS' if ok else 'FAIL'}] {name:<{width}} "
                   f"{value:.3e} (tol {tol:.1e})")
    if not all_ok:
        sys.exit(3)


if __name__ == "__main__":
    main()
