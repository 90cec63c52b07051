"""Writing command results."""

import logging
from pathlib import Path

from pydantic import BaseModel

from pmaplab.core.errors import ConfigError

logger = logging.getLogger("output")


def emit(model: BaseModel, out: str | None) -> None:
    """Print ``model`` as JSON, or write it to ``out`` when given."""
    text = model.model_dump_json(indent=2)
    if out is None:
        print(text)
        return
    target = Path(out)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error("Cannot write %s: %s", target, e)
        raise ConfigError(f"Cannot write {target}") from e
    logger.info("Wrote %s", target)
