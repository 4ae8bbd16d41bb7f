"""Plot the three sigmoidal families and their compactly supported windows.

The window of a sigmoid sigma with half-width m is
xi(x) = sigma(x + m) - sigma(x - m).  Whatever the profile on the
transition band, shifted copies of xi tile the line: xi(x) + xi(x - 2m)
is identically 1 on [0, 2m].  The script prints a numerical check of
that identity and, when matplotlib is importable, saves a figure.
"""

import numpy as np

from fif.kernels import ramp, sigma_eval, smooth_bump, smoothstep, xi_eval

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

KERNELS = [
    ("ramp", ramp()),
    ("smoothstep(1)", smoothstep(1)),
    ("smoothstep(3)", smoothstep(3)),
    ("bump", smooth_bump()),
]


def main():
    x = np.linspace(-1.6, 1.6, 2001)
    print("partition-of-unity defect per family (should be ~1e-16):")
    for name, k in KERNELS:
        t = np.linspace(0.0, 2 * k.m, 10**4)
        defect = np.max(np.abs(xi_eval(k, t) + xi_eval(k, t - 2 * k.m) - 1.0))
        print(f"  {name:15s} {defect:.3e}")

    if plt is None:
        print("matplotlib not installed, skipping the figure")
        return

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for name, k in KERNELS:
        ax1.plot(x, sigma_eval(k, x), label=name)
        ax2.plot(x, xi_eval(k, x), label=name)
    ax1.set_title("sigmoid profiles")
    ax2.set_title("windows xi")
    ax1.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("kernel_windows.png", dpi=120)
    print("wrote kernel_windows.png")


if __name__ == "__main__":
    main()
