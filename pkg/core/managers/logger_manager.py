import os
from aiologger.formatters.json import FUNCTION_NAME_FIELDNAME, LOG_LEVEL_FIELDNAME
from aiologger.loggers.json import JsonLogger, ExtendedJsonFormatter
from aiologger.handlers.files import AsyncFileHandler

class LoggerManager:
    """Class which manages loggers

    Attributes
    ----------
    verification : JsonLogger
        Case start and finish, verdicts, elapsed time and cap events
    lemmas : JsonLogger
        Lemma suite counts and failures
    """
    def __init__(self):
        self.verification = None
        self.lemmas = None

    def _json_logger(self, log_dir: str, filename: str) -> JsonLogger:
        os.makedirs(log_dir, exist_ok=True)
        logger = JsonLogger()

        # create handler to stream to log file
        handler = AsyncFileHandler(filename=os.path.join(log_dir, filename))
        handler.formatter = ExtendedJsonFormatter(exclude_fields=[FUNCTION_NAME_FIELDNAME, LOG_LEVEL_FIELDNAME, 'file_path', 'line_number'])
        logger.add_handler(handler)

        return logger

    async def setup_logger_verification(self, log_dir: str = 'logs') -> None:
        self.verification = self._json_logger(log_dir, 'verification.log')

        # log that logger has started
        await self.verification.info({'type': 'INFO', 'message': 'Verification logger started.'})

    async def setup_logger_lemmas(self, log_dir: str = 'logs') -> None:
        self.lemmas = self._json_logger(log_dir, 'lemmas.log')

        # log that logger has started
        await self.lemmas.info({'type': 'INFO', 'message': 'Lemma logger started.'})

    async def shutdown(self) -> None:
        """Log shutdown and close every started logger."""
        for name, logger in (('Verification', self.verification), ('Lemma', self.lemmas)):
            if logger is None:
                continue
            await logger.info({'type': 'INFO', 'message': f'{name} logger shutdown.'})
            await logger.shutdown()

        self.verification = None
        self.lemmas = None

# Create instance of LoggerManager in module namespace
logger_manager = LoggerManager()
