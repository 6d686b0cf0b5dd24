from .settings import (
    get_settings, Settings, GRID_MOVES, PEAK_PALETTE, CO_DOMINANT_COLOR, SYMBOL_ALPHABET
)

__all__ = [
    "get_settings", "Settings", "GRID_MOVES", "PEAK_PALETTE", "CO_DOMINANT_COLOR",
    "SYMBOL_ALPHABET"
]
