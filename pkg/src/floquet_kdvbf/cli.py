"""Command-line driver: ``floquet-kdvbf {hopf,orbit,spectrum,verify}``.

Exit codes: 0 success, 1 configuration error, 2 no Hopf crossing,
3 orbit solver failure, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import acceptance, orbit, spectrum
from .config import ConfigError, RunConfig, load_config
from .errors import CollapsedToZero, NoConvergence, NoCrossing, PairLost
from .hopf import detect_hopf
from .model import Params

EXIT_OK, EXIT_CONFIG, EXIT_NO_CROSSING, EXIT_NO_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3, 4

log = logging.getLogger("floquet_kdvbf")


def _eps_tag(eps: float) -> str:
    return format(eps, "g")


def wave_path(out_dir, eps) -> Path:
    return Path(out_dir) / f"wave_eps{_eps_tag(eps)}.json"


def _write_columns(path: Path, comment: str, names, columns):
    with path.open("w", newline="\n") as fh:
        fh.write(f"# {comment}\n# {' '.join(names)}\n")
        for row in zip(*columns):
            fh.write(" ".join(format(float(v), ".17g") for v in row) + "\n")


def cmd_hopf(cfg: RunConfig) -> int:
    try:
        res = detect_hopf(Params(cfg.r, cfg.alpha))
    except (NoCrossing, PairLost) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CROSSING
    print(json.dumps({"r": cfg.r, "alpha": cfg.alpha, **res.as_dict()}))
    return EXIT_OK


def cmd_orbit(cfg: RunConfig) -> int:
    params = Params(cfg.r, cfg.alpha)
    out = Path(cfg.out_dir)
    rows = []
    status = EXIT_OK
    try:
        for prof in orbit.iter_family(cfg.eps_grid, params, cfg.fourier_M, cfg.tol):
            head = cfg.header(eps=prof.eps)
            orbit.save_profile(prof, wave_path(out, prof.eps), meta={"description": head})
            xi, Phi = orbit.sample_profile(prof, 512)
            _write_columns(out / f"profile_eps{_eps_tag(prof.eps)}.dat", head,
                           ("xi", "phi1", "phi2", "phi3"), (xi, *Phi))
            rows.append((prof.eps, prof.amplitude(), prof.period, prof.residual))
            print(f"eps={prof.eps:g}: amplitude {rows[-1][1]:.6g}, period {prof.period:.10g}, "
                  f"residual {prof.residual:.1e}")
    except (NoConvergence, CollapsedToZero) as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_NO_CONVERGENCE
    if rows:
        head = cfg.header(eps=[r[0] for r in rows])
        with (out / "scalings.csv").open("w", newline="\n") as fh:
            fh.write(f"# {head}\neps,amplitude,period,residual\n")
            for row in rows:
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")
        arr = np.array(rows)
        _write_columns(out / "amplitude_vs_sqrt_eps.dat", head, ("sqrt_eps", "amplitude"),
                       (np.sqrt(arr[:, 0]), arr[:, 1]))
    return status


def cmd_spectrum(cfg: RunConfig, constant_coeff: bool = False) -> int:
    params = Params(cfg.r, cfg.alpha)
    out = Path(cfg.out_dir)
    if constant_coeff:
        profiles = [orbit.constant_coefficient_profile(params, cfg.fourier_M)]
    else:
        profiles = []
        for eps in cfg.eps_grid:
            path = wave_path(out, eps)
            if not path.exists():
                print(f"error: missing profile file {path} (run the orbit subcommand first)",
                      file=sys.stderr)
                return EXIT_CONFIG
            profiles.append(orbit.load_profile(path))
    verdicts = []
    for prof in profiles:
        spec = spectrum.floquet_sweep(prof, cfg.n_theta, cfg.bloch_N)
        v = spectrum.verdict(spec)
        spectrum.write_spectrum_csv(spec, out / f"spectrum_eps{_eps_tag(prof.eps)}.csv",
                                    comment=cfg.header(eps=prof.eps))
        verdicts.append({"eps": prof.eps, "unstable": v.unstable,
                         "max_re_lambda": v.max_re_lambda, "argmax_theta": v.argmax_theta})
        print(v.summary())
    doc = {"meta": {"description": cfg.header(eps=[p.eps for p in profiles])}, "verdicts": verdicts}
    (out / "verdicts.json").write_text(json.dumps(doc, indent=1) + "\n", newline="\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = acceptance.run_all(cfg)
    for res in results:
        print(res.line())
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    return EXIT_OK if n_pass == len(results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--r", type=str)
    common.add_argument("--alpha", type=str)
    common.add_argument("--eps", type=str, help="comma-separated ascending eps values")
    common.add_argument("--n-theta", dest="n_theta", type=str)
    common.add_argument("--fourier-m", dest="fourier_m", type=str)
    common.add_argument("--bloch-n", dest="bloch_n", type=str)
    common.add_argument("--tol", type=str)
    common.add_argument("--out", type=str)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="floquet-kdvbf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hopf", parents=[common], help="locate the Hopf point and crossing slope")
    sub.add_parser("orbit", parents=[common], help="compute the periodic-wave family")
    sp = sub.add_parser("spectrum", parents=[common], help="Floquet spectra and instability verdicts")
    sp.add_argument("--constant-coeff", action="store_true",
                    help="use the eps=0 constant-coefficient operator instead of stored profiles")
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in
                 ("r", "alpha", "eps", "n_theta", "fourier_m", "bloch_n", "tol", "out")}
    try:
        cfg = load_config(args.config, overrides)
        cfg.validate(need_eps=args.command in ("orbit", "verify")
                     or (args.command == "spectrum" and not getattr(args, "constant_coeff", False)))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "hopf":
        return cmd_hopf(cfg)
    if args.command == "orbit":
        return cmd_orbit(cfg)
    if args.command == "spectrum":
        return cmd_spectrum(cfg, constant_coeff=args.constant_coeff)
    return cmd_verify(cfg)


if __name__ == "__main__":
    sys.exit(main())
