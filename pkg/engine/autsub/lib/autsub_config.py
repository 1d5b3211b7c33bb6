"""
AutsubConfig provides a basic interface to get/set configuration for autsub.
"""

import copy
import os
import json
import logging
import logging.config
from enum import Enum
from typing import Dict, Any, Iterator

from ..limits import Limits

logger = logging.getLogger(__name__)

__all__ = [
    "AutsubConfig"
]


class Fields(Enum):
    """
    Configurable fields of autsub. Those do not start with '_' are treated
    as public fields that can be showed and configured in CLI.
    """
    CAP_WORD = "cap_word"
    CAP_RADIUS = "cap_radius"
    CAP_KERNEL = "cap_kernel"
    PMAX = "pmax"
    JOBS = "jobs"
    LOG_FILE = "log_file"
    LOGGING = "_logging"

    @classmethod
    def itervalue(cls) -> Iterator[str]:
        return (field.value for field in cls)


class AutsubConfig:
    """
    Provide basic getter/setter interfaces for all configurable parameters
    of autsub. Values are read from "$AUTSUB_HOME/autsub.conf" (by default
    "~/.autsub/autsub.conf"); a missing file means the built-in defaults.
    Example usage:

        ac = AutsubConfig()
        print(ac.cap_word)
        ac.jobs = 4

    """

    HOME_ENV = "AUTSUB_HOME"
    CONFIG_NAME = "autsub.conf"

    DEFAULT_CONFIG_JSON = {
        Fields.CAP_WORD.value: 10 ** 6,
        Fields.CAP_RADIUS.value: 16,
        Fields.CAP_KERNEL.value: 10 ** 7,
        Fields.PMAX.value: 64,
        Fields.JOBS.value: 1,
        Fields.LOG_FILE.value: None,

        # Passed to logging.config.dictConfig; a file handler is added when
        # log_file is set.
        Fields.LOGGING.value: {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'verbose': {
                    'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
                    'style': '{',
                },
                'simple': {
                    'format': '[{levelname}] {module} {message}',
                    'style': '{',
                },
            },
            'handlers': {
                'console': {
                    'class': 'logging.StreamHandler',
                    'stream': 'ext://sys.stderr',
                    'formatter': 'simple',
                },
            },
            'root': {
                'handlers': ['console'],
                'level': 'NOTSET',
            },
        }
    }

    @classmethod
    def config_path(cls) -> str:
        home = os.environ.get(cls.HOME_ENV)
        if not home:
            home = os.path.join(os.path.expanduser('~'), ".autsub")
        return home

    @classmethod
    def config_file(cls) -> str:
        return os.path.join(cls.config_path(), cls.CONFIG_NAME)

    def __getattr__(self, name: str) -> Any:
        """
        Getter for attributes in Fields. It will load from the config file
        and fall back to the defaults for missing entries.
        """
        if name not in Fields.itervalue():
            return self.__getattribute__(name)
        return self._load_config().get(name)

    def __setattr__(self, name: str, value: Any) -> None:
        """
        Setter for attributes in Fields. It will load from the config file,
        overwrite the entry and save it back. Caps are validated before
        anything is written.
        """
        if name not in Fields.itervalue():
            return super().__setattr__(name, value)

        config: Dict[str, Any] = self._load_config()
        if name in self._cap_fields():
            value = int(value)
            config[name] = value
            self._limits_from(config)
        else:
            config[name] = value
        self._save_config(config)

    @staticmethod
    def _cap_fields():
        return (Fields.CAP_WORD.value, Fields.CAP_RADIUS.value,
                Fields.CAP_KERNEL.value, Fields.PMAX.value,
                Fields.JOBS.value)

    @classmethod
    def _save_config(cls, config: Dict[str, Any]):
        """
        Save the configuration of autsub

        Args:
            config: A dict of autsub config. It should have the same format
                with DEFAULT_CONFIG_JSON.
        """
        os.makedirs(cls.config_path(), exist_ok=True)
        with open(cls.config_file(), "w") as f:
            json.dump(config, f, indent=4)
        logger.info('Configuration saved under "%s".', cls.config_file())

    @classmethod
    def _load_config(cls) -> Dict[str, Any]:
        """
        Load the configuration of autsub, merged over the defaults.
        """
        config = copy.deepcopy(cls.DEFAULT_CONFIG_JSON)
        if os.path.exists(cls.config_file()):
            with open(cls.config_file(), "r") as f:
                config.update(json.load(f))
        return config

    @classmethod
    def is_initialized(cls) -> bool:
        """
        Check if the config file exists.
        """
        return os.path.exists(cls.config_file())

    @staticmethod
    def _limits_from(config: Dict[str, Any], **overrides) -> Limits:
        values = {
            "word": config[Fields.CAP_WORD.value],
            "radius": config[Fields.CAP_RADIUS.value],
            "kernel": config[Fields.CAP_KERNEL.value],
            "pmax": config[Fields.PMAX.value],
            "jobs": config[Fields.JOBS.value],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Limits(**values)

    def limits(self, **overrides) -> Limits:
        """
        The caps as a Limits value. Keyword arguments that are not None
        (word, radius, kernel, pmax, jobs) replace the configured values.

        Raises:
            ValueError: If a cap is not a positive integer.
        """
        return self._limits_from(self._load_config(), **overrides)

    def logging_config(self) -> Dict[str, Any]:
        config = self._load_config()
        settings = copy.deepcopy(config[Fields.LOGGING.value])
        log_file = config.get(Fields.LOG_FILE.value)
        if log_file:
            settings['handlers']['file'] = {
                'level': 'NOTSET',
                'class': 'logging.FileHandler',
                'filename': log_file,
                'formatter': 'verbose',
            }
            settings['root']['handlers'].append('file')
        return settings

    def configure_logging(self) -> None:
        logging.config.dictConfig(self.logging_config())

    def show_config(self) -> None:
        """
        Show public configuration of autsub
        """
        print(json.dumps(
            {
                field: getattr(self, field)
                for field in Fields.itervalue()
                if not field.startswith('_')
            },
            sort_keys=True,
            indent=4
        ))
