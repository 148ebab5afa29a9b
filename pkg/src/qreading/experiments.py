"""Parameter sweeps over the number of copies and the figure presets built on them."""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .discrimination import ln_classical_lb_noisy, psi_qcb_printed, scenario_qcb
from .errors import ConfigError
from .logprob import log10
from .metrics import info_retrieved
from .scenario import ReadoutScenario
from .states import TransmitterSpec, TruncationPolicy
from .svgplot import line_plot

__all__ = [
    "OUT_DIR_ENV",
    "FIGURES",
    "SweepConfig",
    "SweepTable",
    "load_config",
    "parse_config",
    "run_sweep",
    "write_outputs",
    "reproduce_figure",
    "default_out_dir",
]

OUT_DIR_ENV = "QREADING_OUT_DIR"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "out"))


def fmt(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.12g}"


@dataclass(frozen=True)
class SweepConfig:
    """One curve family: fixed ``N_S``, ``N_B``; copies ``M`` over a range."""

    name: str
    transmitters: tuple[TransmitterSpec, ...]
    N_S: float
    N_B: float
    M_start: int = 1
    M_stop: int = 35
    M_step: int = 1
    outputs: frozenset = frozenset({"csv"})
    out_dir: Path = field(default_factory=default_out_dir)
    kind: str = "bounds"
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if not self.transmitters:
            raise ConfigError("sweep needs at least one transmitter")
        if self.M_step < 1 or self.M_start < 1 or self.M_stop < self.M_start:
            raise ConfigError(
                f"empty copy range M={self.M_start}..{self.M_stop} step {self.M_step}"
            )
        unknown = set(self.outputs) - {"csv", "svg"}
        if unknown:
            raise ConfigError(f"unknown outputs {sorted(unknown)}")
        if self.kind not in ("bounds", "info"):
            raise ConfigError(f"unknown plot kind {self.kind!r}")
        for tr in self.transmitters:
            if abs(tr.signal_intensity - self.N_S) > 1e-9:
                raise ConfigError(
                    f"transmitter {tr.label} has N_S={tr.signal_intensity}, sweep has N_S={self.N_S}"
                )

    @property
    def copies(self) -> range:
        return range(self.M_start, self.M_stop + 1, self.M_step)

    def header(self) -> list[str]:
        labels = ",".join(tr.label for tr in self.transmitters)
        return [
            f"name={self.name}",
            f"N_S={fmt(self.N_S)}",
            f"N_B={fmt(self.N_B)}",
            "r0=0",
            "r1=1",
            f"M={self.M_start}..{self.M_stop} step {self.M_step}",
            f"transmitters={labels}",
            f"tail_epsilon={fmt(self.truncation.tail_epsilon)}",
            f"min_margin={self.truncation.min_margin}",
            "probabilities are log10; information in bits",
        ]


def _labels(transmitters: Iterable[TransmitterSpec]) -> list[str]:
    """Column labels; a lone M&M transmitter is just ``mm``."""
    transmitters = list(transmitters)
    n_mm = sum(tr.family == "mandm" for tr in transmitters)
    labels = ["mm" if tr.family == "mandm" and n_mm == 1 else tr.label for tr in transmitters]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate transmitters {labels}")
    return labels


@dataclass
class SweepTable:
    header: list[str]
    columns: list[str]
    rows: list[list[float]]

    def column(self, name: str) -> list[float]:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]

    def to_csv(self) -> str:
        lines = [f"# {h}" for h in self.header]
        lines.append(",".join(self.columns))
        lines.extend(",".join(fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def run_sweep(config: SweepConfig) -> SweepTable:
    """One row per ``M``: log10 Chernoff bounds, log10 classical bound, J and G columns."""
    labels = _labels(config.transmitters)
    columns = ["M"]
    columns += [f"log10_P_qcb_{lab}" for lab in labels]
    columns += [
        f"log10_P_qcb_{lab}_printed"
        for tr, lab in zip(config.transmitters, labels)
        if tr.family == "photon_coherent"
    ]
    columns += ["log10_C"]
    columns += [f"J_min_Q_{lab}" for lab in labels]
    columns += ["J_max_C"]
    columns += [f"G_{lab}" for lab in labels]

    rows = []
    for M in config.copies:
        scenario = ReadoutScenario(M, config.N_S, config.N_B, truncation=config.truncation)
        ln_q = [scenario_qcb(scenario, tr) for tr in config.transmitters]
        ln_printed = [
            psi_qcb_printed(config.N_S, config.N_B, M)
            for tr in config.transmitters
            if tr.family == "photon_coherent"
        ]
        ln_c = ln_classical_lb_noisy(M, config.N_S, config.N_B, scenario.r0, scenario.r1)
        j_q = [info_retrieved(v, log=True) for v in ln_q]
        j_c = info_retrieved(ln_c, log=True)
        row = [float(M)]
        row += [log10(v) for v in ln_q]
        row += [log10(v) for v in ln_printed]
        row += [log10(ln_c)]
        row += j_q
        row += [j_c]
        row += [j - j_c for j in j_q]
        rows.append(row)
    return SweepTable(config.header(), columns, rows)


def _svg_for(config: SweepConfig, table: SweepTable) -> str:
    x = table.column("M")
    if config.kind == "bounds":
        series = {
            name.replace("log10_P_qcb_", "QCB "): table.column(name)
            for name in table.columns
            if name.startswith("log10_P_qcb_")
        }
        series["classical LB"] = table.column("log10_C")
        ylabel = "log10 error probability"
    else:
        series = {
            name.replace("J_min_Q_", "J_min,Q "): table.column(name)
            for name in table.columns
            if name.startswith("J_min_Q_")
        }
        series["J_max,C"] = table.column("J_max_C")
        ylabel = "information (bits)"
    title = f"{config.name}: N_S={fmt(config.N_S)}, N_B={fmt(config.N_B)}"
    return line_plot(x, series, title, "copies M", ylabel)


def write_outputs(config: SweepConfig, table: SweepTable) -> list[Path]:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in config.outputs:
        path = out_dir / f"{config.name}.csv"
        path.write_text(table.to_csv())
        written.append(path)
    if "svg" in config.outputs:
        path = out_dir / f"{config.name}.svg"
        path.write_text(_svg_for(config, table))
        written.append(path)
    return written


_psi = TransmitterSpec.photon_coherent_for_intensity

FIGURES = {
    "1a": dict(N_S=1.0, N_B=0.1, transmitters=(TransmitterSpec.mandm(2, 0),), M_stop=35, kind="bounds"),
    "1b": dict(
        N_S=3.0,
        N_B=0.1,
        transmitters=tuple(TransmitterSpec.mandm(m, 6 - m) for m in (4, 5, 6)),
        M_stop=35,
        kind="bounds",
    ),
    "2a": dict(N_S=0.5, N_B=1e-5, transmitters=(TransmitterSpec.mandm(1, 0),), M_stop=15, kind="info"),
    "2b": dict(
        N_S=2.5,
        N_B=1.0,
        transmitters=tuple(TransmitterSpec.mandm(m, 5 - m) for m in (3, 4, 5)),
        M_stop=15,
        kind="info",
    ),
    "3a": dict(N_S=1.0, N_B=0.01, transmitters=(_psi(1.0), TransmitterSpec.single_fock()), M_stop=35, kind="bounds"),
    "3b": dict(N_S=5.0, N_B=1.5, transmitters=(_psi(5.0),), M_stop=35, kind="bounds"),
    "4": dict(N_S=0.75, N_B=1e-5, transmitters=(_psi(0.75),), M_stop=15, kind="info"),
}


def figure_config(
    fig_id: str,
    out_dir: Path | None = None,
    svg: bool = False,
    M_stop: int | None = None,
) -> SweepConfig:
    if fig_id not in FIGURES:
        raise ConfigError(f"unknown figure {fig_id!r}; choose from {sorted(FIGURES)}")
    preset = dict(FIGURES[fig_id])
    if M_stop is not None:
        preset["M_stop"] = M_stop
    return SweepConfig(
        name=fig_id,
        outputs=frozenset({"csv", "svg"} if svg else {"csv"}),
        out_dir=Path(out_dir) if out_dir is not None else default_out_dir(),
        **preset,
    )


def reproduce_figure(
    fig_id: str, out_dir: Path | None = None, svg: bool = False, M_stop: int | None = None
) -> list[Path]:
    """Write ``<id>.csv`` (and ``<id>.svg`` when asked) for one figure preset."""
    config = figure_config(fig_id, out_dir, svg, M_stop)
    return write_outputs(config, run_sweep(config))


def _transmitter_from_section(section: configparser.SectionProxy, n_s: float) -> TransmitterSpec:
    where = f"[{section.name}]"
    family = section.get("family", "").strip().lower()
    try:
        if family in ("mandm", "noon"):
            m = section.getint("m")
            if m is None:
                raise ConfigError(f"{where} family={family} needs m")
            if family == "noon":
                return TransmitterSpec.noon(m)
            if "m_prime" in section:
                return TransmitterSpec.mandm(m, section.getint("m_prime"))
            m_prime = 2.0 * n_s - m
            if m_prime != int(m_prime):
                raise ConfigError(f"{where} 2*N_S - m = {m_prime} is not an integer")
            return TransmitterSpec.mandm(m, int(m_prime))
        if family == "photon_coherent":
            if "alpha" in section:
                return TransmitterSpec.photon_coherent(complex(section.get("alpha").replace(" ", "")))
            return TransmitterSpec.photon_coherent_for_intensity(n_s)
        if family == "single_fock":
            return TransmitterSpec.single_fock()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where} family: unknown transmitter family {family!r}")


def parse_config(text: str, source: str = "<config>") -> SweepConfig:
    """Parse an INI-style sweep description.

    A ``[sweep]`` section holds ``N_S``, ``N_B``, ``M_start``, ``M_stop``,
    ``M_step``, ``outputs``, ``out_dir``, ``name`` and ``kind``; each
    ``[transmitter:<label>]`` section holds ``family`` plus ``m``/``m_prime``
    or ``alpha``.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if "sweep" not in parser:
        raise ConfigError(f"{source}: missing [sweep] section")
    sweep = parser["sweep"]

    def number(key, conv, default=None):
        if key not in sweep:
            if default is None:
                raise ConfigError(f"{source} [sweep] {key}: required")
            return default
        try:
            return conv(sweep[key])
        except ValueError as exc:
            raise ConfigError(f"{source} [sweep] {key}: {exc}") from exc

    n_s = number("N_S", float)
    n_b = number("N_B", float)
    transmitters = tuple(
        _transmitter_from_section(parser[name], n_s)
        for name in parser.sections()
        if name.startswith("transmitter")
    )
    outputs = frozenset(
        part.strip() for part in sweep.get("outputs", "csv").split(",") if part.strip()
    )
    out_dir = Path(sweep["out_dir"]) if "out_dir" in sweep else default_out_dir()
    m_start, m_stop, m_step = (
        number("M_start", int, 1),
        number("M_stop", int, 35),
        number("M_step", int, 1),
    )
    if m_stop < m_start or m_start < 1:
        raise ConfigError(f"{source} [sweep] M_stop: empty copy range M={m_start}..{m_stop}")
    if m_step < 1:
        raise ConfigError(f"{source} [sweep] M_step: must be >= 1, got {m_step}")
    if not transmitters:
        raise ConfigError(f"{source}: no [transmitter:<name>] sections")
    try:
        return SweepConfig(
            name=sweep.get("name", Path(source).stem or "sweep"),
            transmitters=transmitters,
            N_S=n_s,
            N_B=n_b,
            M_start=m_start,
            M_stop=m_stop,
            M_step=m_step,
            outputs=outputs,
            out_dir=out_dir,
            kind=sweep.get("kind", "bounds"),
        )
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{source} [sweep]: {exc}") from exc


def load_config(path: str | os.PathLike) -> SweepConfig:
    path = Path(path)
    return parse_config(path.read_text(), source=str(path))
