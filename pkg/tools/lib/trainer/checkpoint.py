"""
Parameter checkpoints as numpy ``.npz`` archives.

Keys have the form ``"<module>/<parameter>"``, e.g. ``actor.0/dense0.weight``
or ``critic/attn.proj.weight``.
"""

from collections import defaultdict
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from tools.lib.nn import ParamStore


def save_checkpoint(path: Union[str, Path], stores: Mapping[str, ParamStore]) -> Path:
    """Write every store's parameters into one archive."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {
        f"{module}/{name}": values
        for module, store in stores.items()
        for name, values in store.state_dict().items()
    }
    with open(path, "wb") as f:
        np.savez(f, **arrays)
    return path


def load_checkpoint(path: Union[str, Path]) -> Dict[str, Dict[str, np.ndarray]]:
    """Read an archive back into ``{module: {parameter: array}}``."""
    grouped: Dict[str, Dict[str, np.ndarray]] = defaultdict(dict)
    with np.load(path) as archive:
        for key in archive.files:
            module, _, name = key.partition("/")
            grouped[module][name] = archive[key]
    return dict(grouped)


def restore_checkpoint(path: Union[str, Path], stores: Mapping[str, ParamStore]) -> None:
    """
    Load saved values into existing stores.

    Raises:
        KeyError: If a module or parameter is missing from the archive
        ShapeMismatchError: If a saved shape differs
    """
    saved = load_checkpoint(path)
    for module, store in stores.items():
        if module not in saved:
            raise KeyError(f"Checkpoint has no module '{module}'")
        store.load_state_dict(saved[module])


__all__ = ["save_checkpoint", "load_checkpoint", "restore_checkpoint"]
