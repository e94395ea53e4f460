"""Independent high-accuracy references used to freeze golden values.

Run ``python3 tests/oracles.py`` to regenerate the numbers quoted in the test
suite.  The oracle route differs from the production defaults: rk4 where the
check targets the numerov path, much larger cutoff sequences, and finer grids.
"""
from __future__ import annotations

import numpy as np

from bsecsim import (
    BsecParams,
    NumericsConfig,
    PotentialModel,
    find_peak,
    scan_reflectivity,
    solve_scattering,
)


def rk4_oracle_config(model: PotentialModel) -> NumericsConfig:
    """Independent cross-check config: rk4, half the default step, doubled
    default cutoff sequence."""
    k = model.params.k
    seq = tuple(2.0 * x / k for x in (200.0, 400.0, 800.0))
    return NumericsConfig(x_match_sequence=seq, grid_refine=0.5, integrator="rk4")


def deep_config(model: PotentialModel, scale: float = 16.0,
                refine: float = 0.6) -> NumericsConfig:
    """Numerov reference with a cutoff sequence ``scale`` times the default."""
    k = model.params.k
    seq = tuple(scale * x / k for x in (200.0, 400.0, 800.0))
    return NumericsConfig(x_match_sequence=seq, grid_refine=refine)


def oracle_fwhm(e_bsec: float, c: float, window, n: int, cutoff_scale: float = 8.0,
                workers: int = 2):
    model = PotentialModel.bsec(BsecParams(e_bsec, c))
    cfg = deep_config(model, scale=cutoff_scale, refine=1.0)
    scan = scan_reflectivity(model, window[0], window[1], n, cfg, workers=workers)
    return find_peak(scan)


def main() -> None:
    p11 = BsecParams(1.0, 1.0)
    m11 = PotentialModel.bsec(p11)

    print("== single-energy references, e_bsec=1 c=1 ==")
    amp_rk4 = solve_scattering(m11, 2.0, rk4_oracle_config(m11))
    amp_deep = solve_scattering(m11, 2.0, deep_config(m11))
    print(f"E=2.0 rk4 oracle : r={amp_rk4.r:.10f}  |r|={abs(amp_rk4.r):.10f}")
    print(f"E=2.0 deep       : r={amp_deep.r:.10f}  |r|={abs(amp_deep.r):.10f}")
    amp_12 = solve_scattering(m11, 1.2, deep_config(m11))
    print(f"E=1.2 deep       : |r|={abs(amp_12.r):.10f}")

    print("\n== fwhm references, e_bsec=1, window [0.5, 1.5], n=401 ==")
    for c in (0.25, 1.0):
        for label, scale in (("deep x8", 8.0), ("deep x16", 16.0)):
            rep = oracle_fwhm(1.0, c, (0.5, 1.5), 401, cutoff_scale=scale)
            print(f"c={c:<5} {label:>8}: e_peak={rep.e_peak:.6f} r_peak={rep.r_peak:.6f} "
                  f"fwhm={rep.fwhm:.6f} trunc={rep.truncated}")
        model = PotentialModel.bsec(BsecParams(1.0, c))
        scan = scan_reflectivity(model, 0.5, 1.5, 401, workers=2)
        rep = find_peak(scan)
        print(f"c={c:<5} default : e_peak={rep.e_peak:.6f} r_peak={rep.r_peak:.6f} "
              f"fwhm={rep.fwhm:.6f} trunc={rep.truncated} conv={scan.n_converged}/401")

    print("\n== fwhm references, e_bsec=10, window [9.2, 10.8], n=401 ==")
    k10 = np.sqrt(10.0)
    ac_cfg = NumericsConfig(x_match_sequence=tuple(x / k10 for x in (1600.0, 3200.0, 6400.0)))
    for c in (0.25, 0.5, 1.0, 2.0):
        model = PotentialModel.bsec(BsecParams(10.0, c))
        scan = scan_reflectivity(model, 9.2, 10.8, 401, ac_cfg, workers=2)
        rep = find_peak(scan)
        rep_deep = oracle_fwhm(10.0, c, (9.2, 10.8), 401, cutoff_scale=32.0)
        print(f"c={c:<5} ac-cfg: fwhm={rep.fwhm:.6f} r_peak={rep.r_peak:.6f} "
              f"conv={scan.n_converged}/401 | deep x32: fwhm={rep_deep.fwhm:.6f} "
              f"r_peak={rep_deep.r_peak:.6f}")

    print("\n== vanishing width chain, e_bsec=1, geometric c ==")
    prev = None
    for c in (1.0, 0.5, 0.25, 0.125, 0.0625):
        gam = 0.8 * c * c
        window = (max(0.3, 1.0 - 5.0 * gam), 1.0 + 5.0 * gam)
        model = PotentialModel.bsec(BsecParams(1.0, c))
        cfg = deep_config(model, scale=4.0, refine=1.0)
        scan = scan_reflectivity(model, window[0], window[1], 161, cfg, workers=2)
        rep = find_peak(scan)
        marker = "" if prev is None else ("  < prev OK" if rep.fwhm < prev else "  NOT DECREASING")
        print(f"c={c:<7} window=({window[0]:.3f},{window[1]:.3f}) fwhm={rep.fwhm:.6f} "
              f"r_peak={rep.r_peak:.4f} trunc={rep.truncated}{marker}")
        prev = rep.fwhm


if __name__ == "__main__":
    main()
