"""
CSV and SVG report writers
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import BaseModel  # noqa: E402

from core.logging import logger  # noqa: E402
from schemas.checks import DecayDiagnostic, DecayFit  # noqa: E402

FLOAT_FORMAT = "%.12g"

# column order of slices.csv
SLICE_COLUMNS = ["T", "component", "E1", "E2", "E3", "spread", "EG", "mass_term", "margin"]


def ensure_out_dir(out_dir: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def rows_frame(rows: Iterable[BaseModel], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    records = [row.model_dump() for row in rows]
    frame = pd.DataFrame.from_records(records, columns=list(columns) if columns else None)
    return frame


def write_csv(rows: Iterable[BaseModel], path: Path, columns: Optional[Sequence[str]] = None) -> Path:
    """Rows to CSV with a fixed float format, so equal runs give equal bytes"""
    frame = rows_frame(list(rows), columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {path.name}", rows=len(frame))
    return path


def write_metadata(meta: Dict[str, Any], path: Path) -> Path:
    path.write_text(json.dumps(meta, sort_keys=True, indent=2, default=str) + "\n", encoding="utf-8")
    return path


def decay_series(diagnostics: Sequence[DecayDiagnostic], metric: str, component: int) -> List[tuple]:
    out = []
    for d in diagnostics:
        value = getattr(d, metric)
        if d.component == component and value is not None and value > 0:
            out.append((d.T, value))
    return out


def write_decay_svg(diagnostics: Sequence[DecayDiagnostic], fits: Sequence[DecayFit], path: Path,
                    title: str = "") -> Path:
    """Log-log plot of every fitted metric with its fitted line"""
    plt.rcParams["svg.hashsalt"] = "hyperfoil"
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for fit in fits:
        series = decay_series(diagnostics, fit.metric, fit.component)
        if not series:
            continue
        T = np.array([p[0] for p in series])
        v = np.array([p[1] for p in series])
        line, = ax.loglog(T, v, "o", label=f"{fit.metric}[{fit.component}]  {fit.exponent:+.3f}")
        ax.loglog(T, np.exp(fit.intercept) * T ** fit.exponent, "-", color=line.get_color(), lw=1.0)
    ax.set_xlabel("T")
    ax.set_ylabel("sup")
    if title:
        ax.set_title(title)
    if fits:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug(f"Wrote {path.name}", n_fits=len(fits))
    return path
