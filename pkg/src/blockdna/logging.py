import logging
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class BlockDnaLogger:
    """Logger for blockdna.

    Wraps the ``blockdna`` package logger so the command line can change the
    level or add a log file in one place. Library modules log through
    ``logging.getLogger(__name__)`` and inherit whatever is configured here.

    Attributes:
        logger: The underlying logger instance
    """

    def __init__(self, name: str = 'blockdna', level: int = logging.WARNING):
        """Initialize a BlockDnaLogger.

        Args:
            name: The name of the logger
            level: The log level to use
        """
        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)

        if not self.logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            self.logger.addHandler(handler)

    def set_level(self, level: int) -> None:
        """Set the log level.

        Args:
            level: The log level to use
        """
        self.logger.setLevel(level)

    def add_file_handler(self, filename: str, level: Optional[int] = None) -> logging.Handler:
        """Add a file handler to the logger.

        Args:
            filename: The name of the log file
            level: The log level for the file handler (defaults to logger level)

        Returns:
            The handler, so callers can remove it again
        """
        handler = logging.FileHandler(filename)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        if level is not None:
            handler.setLevel(level)
        self.logger.addHandler(handler)
        return handler

    def debug(self, msg: str, *args, **kwargs) -> None:
        self.logger.debug(msg, *args, **kwargs)

    def info(self, msg: str, *args, **kwargs) -> None:
        self.logger.info(msg, *args, **kwargs)

    def warning(self, msg: str, *args, **kwargs) -> None:
        self.logger.warning(msg, *args, **kwargs)

    def error(self, msg: str, *args, **kwargs) -> None:
        self.logger.error(msg, *args, **kwargs)


# Create a singleton instance of the logger
logger = BlockDnaLogger()
