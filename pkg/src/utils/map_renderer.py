"""
Dominance map rendering: ASCII grids, state tables and binary PPM images
"""
import io
import logging
from typing import Dict, List, Optional

from PIL import Image

from ..config import CO_DOMINANT_COLOR, PEAK_PALETTE, SYMBOL_ALPHABET, get_settings
from ..models.mdp import DominanceMap, PeakSet
from .exceptions import RenderError

logger = logging.getLogger(__name__)
settings = get_settings()

CO_DOMINANT_SYMBOL = "="
ANCHOR_FALLBACK = "*"


class MapRenderer:
    """Renders a DominanceMap for the grid (or graph) behind a peak set"""

    def peak_symbols(self, peakset: PeakSet) -> Optional[Dict[int, str]]:
        """
        One character per cycle peak, or None when the alphabet runs out

        Uses the lowercased first character of each peak's primary reward
        id when those are distinct alphanumerics; otherwise symbols are
        taken in order from SYMBOL_ALPHABET.
        """
        peaks = peakset.cycle_peaks
        if len(peaks) > len(SYMBOL_ALPHABET):
            return None
        firsts = [peakset.rewards[p.members[0]].id[0].lower() for p in peaks]
        if all(ch.isalnum() and ch.isascii() for ch in firsts) and len(set(firsts)) == len(firsts):
            return {p.id: ch for p, ch in zip(peaks, firsts)}
        return {p.id: SYMBOL_ALPHABET[rank] for rank, p in enumerate(peaks)}

    def palette_colors(self, peakset: PeakSet) -> Dict[int, tuple]:
        """Palette entry per cycle peak, by rank in id order"""
        return {p.id: PEAK_PALETTE[rank % len(PEAK_PALETTE)] for rank, p in enumerate(peakset.cycle_peaks)}

    def render_ascii_map(self, dmap: DominanceMap, peakset: PeakSet) -> str:
        """
        Text map of dominant peaks

        Grids print height rows of width symbols with row 0 last; anchors
        of the assigned peak are uppercase and co-dominant cells are '='.
        Non-grid models, or more peaks than symbols, fall back to a table.
        """
        model = peakset.model
        symbols = self.peak_symbols(peakset)
        if not model.is_grid or symbols is None:
            if model.is_grid:
                logger.warning(f"{len(peakset.cycle_peaks)} peaks exceed the symbol alphabet; using a table")
            return self._render_table(dmap, peakset)

        anchors = {}
        for peak in peakset.cycle_peaks:
            for state, _ in peak.anchors:
                anchors[state] = peak.id

        rows: List[str] = []
        for y in reversed(range(model.height)):
            row = []
            for x in range(model.width):
                s = model.state_at(x, y)
                if dmap.co_dominant[s]:
                    row.append(CO_DOMINANT_SYMBOL)
                    continue
                peak_id = dmap.assignments[s]
                symbol = symbols[peak_id]
                if anchors.get(s) == peak_id:
                    symbol = symbol.upper() if symbol.islower() else ANCHOR_FALLBACK
                row.append(symbol)
            rows.append("".join(row))
        return "\n".join(rows) + "\n"

    def _render_table(self, dmap: DominanceMap, peakset: PeakSet) -> str:
        lines = ["state peak co_dominant"]
        for s, peak_id in enumerate(dmap.assignments):
            ties = ",".join(str(p) for p in dmap.co_dominant_sets[s])
            lines.append(f"{s} {peak_id} {ties if dmap.co_dominant[s] else '-'}")
        return "\n".join(lines) + "\n"

    def render_ppm_map(self, dmap: DominanceMap, peakset: PeakSet, scale: Optional[int] = None) -> bytes:
        """
        Binary P6 image, one scale x scale block per cell, row 0 at the bottom

        Raises:
            RenderError: the model is not a grid
        """
        model = peakset.model
        if not model.is_grid:
            logger.error("PPM rendering requested for a non-grid model")
            raise RenderError("PPM maps require a grid scenario")
        scale = settings.ppm_scale if scale is None else scale
        if scale < 1:
            raise RenderError(f"scale must be at least 1, got {scale}")

        colors = self.palette_colors(peakset)
        image = Image.new("RGB", (model.width, model.height), CO_DOMINANT_COLOR)
        pixels = image.load()
        for s in range(model.num_states):
            x, y = model.coords(s)
            color = CO_DOMINANT_COLOR if dmap.co_dominant[s] else colors[dmap.assignments[s]]
            pixels[x, model.height - 1 - y] = color

        if scale > 1:
            image = image.resize((model.width * scale, model.height * scale), Image.Resampling.NEAREST)

        buffer = io.BytesIO()
        image.save(buffer, format="PPM")
        return buffer.getvalue()


def render_ascii_map(dmap: DominanceMap, peakset: PeakSet) -> str:
    return MapRenderer().render_ascii_map(dmap, peakset)


def render_ppm_map(dmap: DominanceMap, peakset: PeakSet, scale: Optional[int] = None) -> bytes:
    return MapRenderer().render_ppm_map(dmap, peakset, scale)
