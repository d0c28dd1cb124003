# SPDX-License-Identifier: MIT

import csv
import json
import logging
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from cellboard.uniqueness.exceptions import OverlayParseError, ParameterError, ReportIOError
from cellboard.uniqueness.lattice import cell_size_to_json
from cellboard.uniqueness.sweep import Curve, CurvePoint

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_COLUMNS = ("criterion", "n", "L1", "L2", "J", "h", "T", "value", "unique")
FLOAT_FORMAT = ".9g"
MANIFEST_SUFFIX = ".manifest.json"
OVERLAY_CRITERION = "overlay"

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
DEFAULT_COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#17808b", "#555555")
DEFAULT_DASHES = ("", "6 3", "2 2", "8 3 2 3")


def format_float(value: Optional[float]) -> str:
    return "" if value is None else format(float(value), FLOAT_FORMAT)


def _format_bool(value: Optional[bool]) -> str:
    return "" if value is None else ("true" if value else "false")


def _format_size(value: Any) -> str:
    return "" if value is None else str(cell_size_to_json(value))


def curve_rows(curve: Curve) -> List[List[str]]:
    rows = []
    for point in curve.points:
        rows.append(
            [
                curve.criterion,
                str(curve.n),
                _format_size(curve.L1),
                _format_size(curve.L2),
                format_float(curve.J),
                format_float(point.h),
                format_float(point.T),
                format_float(point.value),
                _format_bool(point.unique),
            ]
        )
    return rows


def write_csv(curve: Curve, path: PathLike) -> Path:
    """
    Writes one row per curve point under the header ``criterion,n,L1,L2,J,h,T,value,unique``. Missing
    coordinates and values are empty fields; floats carry 9 significant digits.
    """
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            writer.writerows(curve_rows(curve))
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e
    logger.info("Wrote %d rows to %s", len(curve.points), path)
    return path


def manifest_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + MANIFEST_SUFFIX)


def write_manifest(path: PathLike, payload: Dict[str, Any]) -> Path:
    """Writes ``payload`` as the JSON sidecar of the output file ``path`` and returns the sidecar path."""
    target = manifest_path(path)
    try:
        with target.open("w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise ReportIOError(target, e.strerror or str(e)) from e
    except TypeError as e:
        raise ParameterError(f"Manifest for {path} is not JSON serializable: {e}") from e
    return target


def curve_to_dict(curve: Curve) -> Dict[str, Any]:
    return {
        "criterion": curve.criterion,
        "n": curve.n,
        "L1": None if curve.L1 is None else cell_size_to_json(curve.L1),
        "L2": None if curve.L2 is None else cell_size_to_json(curve.L2),
        "J": curve.J,
        "axis": curve.axis,
        "points": [
            {"h": p.h, "T": p.T, "value": p.value, "unique": p.unique, "truncated": p.truncated}
            for p in curve.points
        ],
        "manifest": curve.manifest,
    }


def write_json(curve: Curve, path: PathLike) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as f:
            json.dump(curve_to_dict(curve), f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e
    return path


def _parse_optional_float(text: Optional[str], column: str, path: Path, line_number: int) -> Optional[float]:
    if text is None or text.strip() == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise OverlayParseError(path, line_number, f"column '{column}' is not a number: '{text}'") from None
    if not math.isfinite(value):
        raise OverlayParseError(path, line_number, f"column '{column}' is not finite: '{text}'")
    return value


def _parse_optional_bool(text: Optional[str], path: Path, line_number: int) -> Optional[bool]:
    if text is None or text.strip() == "":
        return None
    lowered = text.strip().lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise OverlayParseError(path, line_number, f"column 'unique' must be true or false, got '{text}'")


def read_overlay(path: PathLike) -> Curve:
    """
    Reads a CSV curve with at least ``h`` and ``T`` columns. ``value`` and ``unique`` columns are picked up
    when present, the other columns of :func:`write_csv` output are ignored. The result is tagged as an
    external overlay.

    Raises:
        :obj:`OverlayParseError`: if a column is missing or a row does not parse; the message carries the
            line number.
        :obj:`ReportIOError`: if the file cannot be read.
    """
    path = Path(path)
    points = []
    J = 1.0
    try:
        with path.open("r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            columns = reader.fieldnames or []
            for required in ("h", "T"):
                if required not in columns:
                    raise OverlayParseError(path, 1, f"missing required column '{required}'")
            for row in reader:
                line_number = reader.line_num
                if None in row:
                    raise OverlayParseError(path, line_number, "row has more fields than the header")
                if row.get("J"):
                    J = _parse_optional_float(row["J"], "J", path, line_number)
                points.append(
                    CurvePoint(
                        h=_parse_optional_float(row["h"], "h", path, line_number),
                        T=_parse_optional_float(row["T"], "T", path, line_number),
                        value=_parse_optional_float(row.get("value"), "value", path, line_number),
                        unique=_parse_optional_bool(row.get("unique"), path, line_number),
                    )
                )
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e
    logger.info("Read %d overlay points from %s", len(points), path)
    return Curve(
        criterion=OVERLAY_CRITERION,
        n=0,
        L1=None,
        L2=None,
        J=J,
        axis="h",
        points=points,
        manifest={"source": path.name},
        external=True,
    )


@dataclass(frozen=True)
class CurveStyle:
    color: str = DEFAULT_COLORS[0]
    width: float = 1.5
    dash: str = ""
    label: Optional[str] = None


def default_style(index: int, label: Optional[str] = None) -> CurveStyle:
    return CurveStyle(
        color=DEFAULT_COLORS[index % len(DEFAULT_COLORS)],
        dash=DEFAULT_DASHES[(index // len(DEFAULT_COLORS)) % len(DEFAULT_DASHES)],
        label=label,
    )


@dataclass
class PlotSpec:
    """
    A phase-diagram plot: every curve is drawn as ``T/J`` against ``h/J``. Overlays are external curves,
    assumed to be given in units of ``J`` already.
    """
    title: str
    curves: List[Tuple[Curve, CurveStyle]] = field(default_factory=list)
    overlays: List[Curve] = field(default_factory=list)
    width: int = 720
    height: int = 540
    x_label: str = "h/J"
    y_label: str = "T/J"
    x_range: Optional[Tuple[float, float]] = None
    y_range: Optional[Tuple[float, float]] = None

    def add_curve(self, curve: Curve, style: Optional[CurveStyle] = None) -> None:
        if style is None:
            style = default_style(len(self.curves), curve.label)
        self.curves.append((curve, style))

    def entries(self) -> List[Tuple[Curve, CurveStyle]]:
        entries = list(self.curves)
        for overlay in self.overlays:
            entries.append((overlay, CurveStyle(color="#000000", dash="1 3", width=1.2, label=overlay.label)))
        return entries

    def validate(self) -> None:
        if not self.curves and not self.overlays:
            raise ParameterError("A plot needs at least one curve")
        couplings = {curve.J for curve, _ in self.curves}
        if len(couplings) > 1:
            raise ParameterError(f"Curves of one plot must share the coupling J, got {sorted(couplings)}")
        if self.width < 100 or self.height < 100:
            raise ParameterError(f"Plot must be at least 100x100 pixels, got {self.width}x{self.height}")


def _scaled_points(curve: Curve) -> List[Tuple[float, float]]:
    scale = 1.0 if curve.external else curve.J
    return [(p.h / scale, p.T / scale) for p in curve.points if p.h is not None and p.T is not None]


def nice_ticks(low: float, high: float, target: int = 6) -> List[float]:
    """Tick positions at multiples of ``1, 2 or 5 x 10^k`` covering ``[low, high]``."""
    if high <= low:
        return [low]
    raw = (high - low) / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1.0, 2.0, 5.0, 10.0) if m * magnitude >= raw)
    first = math.ceil(low / step - 1e-9)
    last = math.floor(high / step + 1e-9)
    return [round(k * step, 12) for k in range(first, last + 1)]


def _axis_range(values: Iterable[float], fixed: Optional[Tuple[float, float]]) -> Tuple[float, float]:
    if fixed is not None:
        return fixed
    values = list(values)
    high = max(values) if values else 1.0
    low = min(0.0, min(values)) if values else 0.0
    if high <= low:
        high = low + 1.0
    return low, high * 1.05


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    return format(value, "g")


def build_svg(plot: PlotSpec) -> ET.Element:
    plot.validate()
    entries = plot.entries()
    scaled = [_scaled_points(curve) for curve, _ in entries]
    x_low, x_high = _axis_range((x for pts in scaled for x, _ in pts), plot.x_range)
    y_low, y_high = _axis_range((y for pts in scaled for _, y in pts), plot.y_range)

    margin_left, margin_right, margin_top, margin_bottom = 70, 190, 50, 60
    inner_w = plot.width - margin_left - margin_right
    inner_h = plot.height - margin_top - margin_bottom

    def to_x(x: float) -> float:
        return margin_left + (x - x_low) / (x_high - x_low) * inner_w

    def to_y(y: float) -> float:
        return margin_top + inner_h - (y - y_low) / (y_high - y_low) * inner_h

    svg = ET.Element(
        "svg",
        xmlns=SVG_NAMESPACE,
        version="1.1",
        width=str(plot.width),
        height=str(plot.height),
        viewBox=f"0 0 {plot.width} {plot.height}",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(plot.width), height=str(plot.height), fill="#ffffff")
    title = ET.SubElement(
        svg, "text", x=_fmt(plot.width / 2), y="28", attrib={"text-anchor": "middle", "font-size": "16"}
    )
    title.text = plot.title

    axes = ET.SubElement(svg, "g", id="axes", stroke="#000000", attrib={"stroke-width": "1"})
    ET.SubElement(
        axes, "rect", x=_fmt(margin_left), y=_fmt(margin_top), width=_fmt(inner_w), height=_fmt(inner_h), fill="none"
    )
    labels = ET.SubElement(svg, "g", id="tick-labels", attrib={"font-size": "11", "font-family": "sans-serif"})
    for x in nice_ticks(x_low, x_high):
        px = to_x(x)
        ET.SubElement(
            axes, "line", x1=_fmt(px), y1=_fmt(margin_top + inner_h), x2=_fmt(px), y2=_fmt(margin_top + inner_h + 5)
        )
        text = ET.SubElement(labels, "text", x=_fmt(px), y=_fmt(margin_top + inner_h + 18), attrib={"text-anchor": "middle"})
        text.text = _tick_label(x)
    for y in nice_ticks(y_low, y_high):
        py = to_y(y)
        ET.SubElement(axes, "line", x1=_fmt(margin_left - 5), y1=_fmt(py), x2=_fmt(margin_left), y2=_fmt(py))
        text = ET.SubElement(labels, "text", x=_fmt(margin_left - 8), y=_fmt(py + 4), attrib={"text-anchor": "end"})
        text.text = _tick_label(y)
    x_title = ET.SubElement(
        labels, "text", x=_fmt(margin_left + inner_w / 2), y=_fmt(plot.height - 15), attrib={"text-anchor": "middle"}
    )
    x_title.text = plot.x_label
    y_title = ET.SubElement(
        labels,
        "text",
        x="18",
        y=_fmt(margin_top + inner_h / 2),
        transform=f"rotate(-90 18 {_fmt(margin_top + inner_h / 2)})",
        attrib={"text-anchor": "middle"},
    )
    y_title.text = plot.y_label

    curves_group = ET.SubElement(svg, "g", id="curves", fill="none")
    legend = ET.SubElement(svg, "g", id="legend", attrib={"font-size": "12", "font-family": "sans-serif"})
    legend_x = margin_left + inner_w + 15
    for k, ((curve, style), points) in enumerate(zip(entries, scaled)):
        attrib = {"stroke": style.color, "stroke-width": _fmt(style.width)}
        if style.dash:
            attrib["stroke-dasharray"] = style.dash
        label = style.label if style.label is not None else curve.label
        legend_y = margin_top + 10 + 20 * k
        if points:
            ET.SubElement(
                curves_group,
                "polyline",
                points=" ".join(f"{_fmt(to_x(x))},{_fmt(to_y(y))}" for x, y in points),
                attrib=attrib,
            )
            ET.SubElement(
                legend,
                "line",
                x1=_fmt(legend_x),
                y1=_fmt(legend_y),
                x2=_fmt(legend_x + 25),
                y2=_fmt(legend_y),
                attrib=attrib,
            )
        else:
            label = f"{label} (no boundary on grid)"
        text = ET.SubElement(legend, "text", x=_fmt(legend_x + 32), y=_fmt(legend_y + 4))
        text.text = label
    return svg


def render_svg(plot: PlotSpec, path: PathLike) -> Path:
    """Writes a standalone SVG 1.1 document; identical plots give byte-identical files."""
    path = Path(path)
    tree = ET.ElementTree(build_svg(plot))
    ET.indent(tree)
    try:
        with path.open("wb") as f:
            tree.write(f, encoding="utf-8", xml_declaration=True)
            f.write(b"\n")
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e
    logger.info("Rendered %d curves to %s", len(plot.entries()), path)
    return path
