"""Command-line lab toolkit: works directly on local spectrum/data files.

Output is structured ``key: value`` text so results can be scripted
against or pasted into reports.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .fitting import AttenuationPoint, fit_attenuation, relative_activity, ActivityInput
from .spectrum import CountWindow, parse_spectrum, window_counts
from .values import LabkitError, MeasuredValue, check_result


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _emit(pairs: list[tuple[str, object]]) -> None:
    for key, value in pairs:
        click.echo(f"{key}: {value}")


@click.group()
def main():
    """Process ionizing-radiation spectra and check lab results."""


@main.command("spectrum-summary")
@click.argument("spectrum_file", type=click.Path(exists=True, path_type=Path))
@click.option("--live-time", type=float, required=True, help="Live time in seconds.")
@click.option("--label", default="", help="Label recorded on the spectrum.")
@click.option("--window", "window_spec", default=None,
              help="Inclusive LO:HI selection (channel or energy basis).")
@click.option("--basis", type=click.Choice(["channel", "energy"]), default="channel")
@click.option("--background", type=click.Path(exists=True, path_type=Path),
              default=None, help="Background spectrum file.")
@click.option("--background-live-time", type=float, default=None)
def spectrum_summary(spectrum_file, live_time, label, window_spec, basis,
                     background, background_live_time):
    """Parse a spectrum file; optionally report net counts in a window."""
    try:
        spectrum = parse_spectrum(spectrum_file.read_text("utf-8"), live_time, label)
    except LabkitError as exc:
        _fail(exc)
    pairs = [
        ("file", spectrum_file),
        ("label", spectrum.label or "(none)"),
        ("channels", len(spectrum.channels)),
        ("live_time_s", spectrum.live_time_s),
        ("total_counts", spectrum.total_counts),
        ("has_energies", "yes" if spectrum.has_energies else "no"),
    ]
    if window_spec is not None:
        try:
            lo, _, hi = window_spec.partition(":")
            win = CountWindow(float(lo), float(hi), basis=basis)
        except ValueError as exc:
            _fail(exc)
        bg = None
        if background is not None:
            if background_live_time is None:
                _fail(ValueError("--background requires --background-live-time"))
            try:
                bg = parse_spectrum(
                    background.read_text("utf-8"), background_live_time, "background"
                )
            except LabkitError as exc:
                _fail(exc)
        try:
            net = window_counts(spectrum, win, bg)
        except LabkitError as exc:
            _fail(exc)
        pairs += [
            ("window", f"{win.lo:g}:{win.hi:g} ({win.basis})"),
            ("net_counts", f"{net.value:g}"),
            ("sigma", f"{net.sigma:g}"),
        ]
    _emit(pairs)


@main.command("fit-attenuation")
@click.argument("data_file", type=click.Path(exists=True, path_type=Path),
                required=False)
@click.option("--point", "points_opt", multiple=True,
              help="thickness:counts[:sigma] (sigma defaults to sqrt of counts).")
@click.option("--unit", default="cm", help="Declared thickness unit (not converted).")
def fit_attenuation_cmd(data_file, points_opt, unit):
    """Fit N(d) = N0*exp(-mu*d) from a data file or repeated --point flags.

    The data file holds whitespace-delimited rows ``thickness counts [sigma]``
    with ``#`` comments.
    """
    rows: list[str] = list(points_opt)
    if data_file is not None:
        for raw in data_file.read_text("utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append(":".join(line.split()))
    if not rows:
        _fail(ValueError("no data: pass a file or --point flags"))
    points = []
    for row in rows:
        parts = row.split(":")
        try:
            if len(parts) == 2:
                d, n = float(parts[0]), float(parts[1])
                sigma = n ** 0.5
            elif len(parts) == 3:
                d, n, sigma = (float(p) for p in parts)
            else:
                raise ValueError(f"bad point {row!r}")
            points.append(AttenuationPoint(d, MeasuredValue(n, sigma)))
        except (ValueError, LabkitError) as exc:
            _fail(exc)
    try:
        fit = fit_attenuation(points, thickness_unit=unit)
    except LabkitError as exc:
        _fail(exc)
    pairs = [
        ("n_points", fit.n_points),
        ("thickness_unit", fit.thickness_unit),
        ("mu", f"{fit.mu.value:.9g}"),
        ("mu_sigma", f"{fit.mu.sigma:.6g}"),
        ("n0", f"{fit.n0.value:.9g}"),
        ("n0_sigma", f"{fit.n0.sigma:.6g}"),
        ("half_value_layer", f"{fit.d_half.value:.9g}"),
        ("half_value_layer_sigma", f"{fit.d_half.sigma:.6g}"),
        ("residual_rms", f"{fit.residual_rms:.6g}"),
    ]
    for warning in fit.warnings:
        pairs.append(("warning", warning))
    _emit(pairs)


@main.command("relative-activity")
@click.option("--ref-activity", type=float, required=True, help="A_ref in Bq.")
@click.option("--ref-sigma", type=float, default=0.0, help="sigma of A_ref in Bq.")
@click.option("--nx", type=int, required=True, help="Window counts of the unknown.")
@click.option("--tx", type=float, required=True, help="Live time of the unknown (s).")
@click.option("--nref", type=int, required=True, help="Window counts of the reference.")
@click.option("--tref", type=float, required=True, help="Live time of the reference (s).")
def relative_activity_cmd(ref_activity, ref_sigma, nx, tx, nref, tref):
    """Determine an unknown activity from count rates against a reference."""
    try:
        result = relative_activity(
            ActivityInput(
                a_ref=MeasuredValue(ref_activity, ref_sigma),
                n_x=nx, n_ref=nref, t_x=tx, t_ref=tref,
            )
        )
    except LabkitError as exc:
        _fail(exc)
    _emit([
        ("activity_bq", f"{result.value:.9g}"),
        ("sigma_bq", f"{result.sigma:.6g}"),
    ])


@main.command("check")
@click.option("--given", type=float, required=True, help="The value to check.")
@click.option("--value", type=float, required=True, help="Reference value.")
@click.option("--sigma", type=float, default=0.0, help="Reference sigma.")
@click.option("--k-sigma", type=float, default=3.0)
@click.option("--rel-tol", type=float, default=0.05)
def check_cmd(given, value, sigma, k_sigma, rel_tol):
    """Check a computed result against a reference with its error."""
    try:
        outcome = check_result(given, MeasuredValue(value, sigma),
                               k_sigma=k_sigma, rel_tol=rel_tol)
    except (ValueError, LabkitError) as exc:
        _fail(exc)
    _emit([
        ("verdict", "pass" if outcome.passed else "fail"),
        ("deviation", f"{outcome.deviation:g}"),
        ("sigma_bound", f"{outcome.sigma_bound:g}"),
        ("relative_bound", f"{outcome.relative_bound:g}"),
        ("explanation", outcome.explanation),
    ])
    if not outcome.passed:
        sys.exit(2)


if __name__ == "__main__":
    main()
