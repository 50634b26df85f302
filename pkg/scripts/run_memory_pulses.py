#!/usr/bin/env python3
"""Design write/read/entangle coupling schedules for the analytic wavepackets
and validate each against the discretized cascaded-network simulator.

Usage:
    python scripts/run_memory_pulses.py [--gamma0-mhz 1.5] [--Tf 0.5] [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

import resomem as rm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma0-mhz", type=float, default=1.5, help="gamma0 / 2 pi in MHz")
    ap.add_argument("--Tf", type=float, default=0.5, help="entangle-pulse transmittance")
    ap.add_argument("--out", type=Path, default=None, help="emit schedule CSVs here")
    args = ap.parse_args()

    g0 = 2 * np.pi * args.gamma0_mhz * 1e6
    t0 = 1.0 / g0
    cases = {
        "write(exp_rising)": (
            rm.write_pulse(rm.standard_wavepacket("exp_rising", g0, np.linspace(-20 / g0, 1 / g0, 42001))),
            0.0,
        ),
        "read(exp_decaying)": (
            rm.read_pulse(rm.standard_wavepacket("exp_decaying", g0, np.linspace(0, 20 / g0, 42001))),
            0.0,
        ),
        f"entangle(time_bin, Tf={args.Tf})": (
            rm.entangle_pulse(rm.standard_wavepacket("time_bin", g0, np.linspace(0, t0, 20001), t0=t0), args.Tf),
            args.Tf,
        ),
    }

    print(f"gamma0 = 2 pi x {args.gamma0_mhz} MHz; network dt = 1e-3 / gamma0")
    print(f"{'schedule':<28} {'target Tf':>9} {'eff. Tf':>10} {'in ovl':>8} {'out ovl':>8}")
    for name, (sched, Tf) in cases.items():
        net = rm.simulate_network(sched, 1e-3 / g0)
        print(f"{name:<28} {Tf:>9.3f} {net.effective_Tf:>10.6f} {net.in_overlap:>8.5f} {net.out_overlap:>8.5f}")

    hw = rm.MemoryHardware(gamma0=g0)
    v = rm.voltage_gamma(hw, g0, "inverse")
    print(f"Pockels voltage for gamma0: {v:.1f} V (V_pi = {hw.V_pi:.0f} V)")
    print(f"multimode overlap at T0=0.3: {rm.multimode_overlap(0.3):.4f}")

    if args.out is not None:
        from resomem.cli import run_scenario

        for wp, extra in (("exp_rising", {}), ("exp_decaying", {}), ("time_bin", {"Tf": args.Tf})):
            manifest = run_scenario(
                {"kind": "pulse", "wavepacket": wp, "gamma0": g0, **extra},
                args.out / wp,
            )
            print(f"wrote {manifest}")


if __name__ == "__main__":
    main()
