"""Figure rendering for the report path.

Each CLI report command drops a PNG next to its CSV.  Rendering uses the
Agg backend so it works headless; the CSV stays the canonical output and
the figures are a visual companion.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_trajectory(x, t, states, path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    mesh = ax.pcolormesh(x, t, states, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="u(x,t)")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_reconstruction(x, u0_exact, u0_hat, psi_measured, psi_refit, path) -> None:
    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    left.plot(x, u0_exact, "k-", label="exact initial state")
    left.plot(x, u0_hat, "r--", label="reconstruction")
    left.set_xlabel("x")
    left.legend(frameon=False)
    right.plot(x, psi_measured, "k-", label="measured terminal data")
    right.plot(x, psi_refit, "r--", label="refit terminal state")
    right.set_xlabel("x")
    right.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_error_table(reports, path, by="N") -> None:
    """Error decay plot: one line per alpha, x-axis N (table 1) or delta."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    alphas = sorted({rep.alpha for rep in reports})
    log_x = all(getattr(rep, by) > 0 for rep in reports)
    for alpha in alphas:
        rows = [rep for rep in reports if rep.alpha == alpha]
        xs = [getattr(rep, by) for rep in rows]
        ax.plot(xs, [rep.e_u0_inf for rep in rows], "o-", label=f"alpha={alpha:g}, max")
        ax.plot(xs, [rep.e_u0_l2h for rep in rows], "s--", label=f"alpha={alpha:g}, 2h")
    ax.set_yscale("log")
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel("N = M" if by == "N" else "noise level")
    ax.set_ylabel("initial-state error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_oracle(reports, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ks = [rep.k for rep in reports]
    ax.plot(ks, [rep.unit_response for rep in reports], "o-", label="unit response at T")
    ax.axhline(reports[0].floor, color="grey", linestyle=":", label="decay floor")
    ax.set_xlabel("mode index")
    ax.set_ylabel("terminal value")
    ax.set_ylim(0.0, 1.05)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
