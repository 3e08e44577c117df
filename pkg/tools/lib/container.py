"""
Dependency Injection Container for DRE-MARL experiments

This module provides a dependency injection container so that the CLI and
tests can swap the configuration source, output root and logger.
"""

import os
import threading
from pathlib import Path
from typing import Optional

from tools.lib.config_loader import ConfigLoader
from tools.lib.logging.structured_logger import StructuredLogger


DEFAULT_OUTPUT_ROOT = "results"


class ExperimentContainer:
    """
    Dependency injection container for the experiment driver.

    Provides lazily initialized, thread-safe access to the configuration
    loader, the output root and the structured logger.
    """

    def __init__(self, config_path: Optional[str] = None, output_root: Optional[str] = None):
        """
        Initialize the container.

        Args:
            config_path: JSON configuration file; None means defaults only
            output_root: Output directory; None reads DREMARL_OUTPUT_ROOT
                (default: "results")
        """
        self.config_path = config_path
        self._output_root_override = output_root
        self._config_loader: Optional[ConfigLoader] = None
        self._output_root: Optional[Path] = None
        self._structured_logger: Optional[StructuredLogger] = None
        self._initialized = False
        self._lock = threading.RLock()

    @property
    def config_loader(self) -> ConfigLoader:
        if self._config_loader is None:
            with self._lock:
                if self._config_loader is None:
                    self._config_loader = ConfigLoader(self.config_path)
        return self._config_loader

    @property
    def output_root(self) -> Path:
        if self._output_root is None:
            with self._lock:
                if self._output_root is None:
                    root = self._output_root_override or os.getenv(
                        "DREMARL_OUTPUT_ROOT", DEFAULT_OUTPUT_ROOT
                    )
                    self._output_root = Path(root)
        return self._output_root

    @property
    def structured_logger(self) -> StructuredLogger:
        if self._structured_logger is None:
            with self._lock:
                if self._structured_logger is None:
                    self._structured_logger = StructuredLogger()
        return self._structured_logger

    def initialize(self) -> None:
        """
        Eagerly initialize all dependencies and create the output root.

        Raises:
            ConfigurationError: If the configuration file cannot be read
        """
        with self._lock:
            if not self._initialized:
                self.config_loader.read_file()
                self.output_root.mkdir(parents=True, exist_ok=True)
                _ = self.structured_logger
                self._initialized = True

