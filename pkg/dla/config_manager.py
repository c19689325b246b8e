import json
import logging
import os

from dla.errors import ParseError
from dla.formats import parse_rational

logger = logging.getLogger(__name__)

CONFIG_ENV = "DLA_CONFIG"
DEFAULT_CONFIG_FILE = "dla_config.json"

DEFAULTS = {
    "precision": "1/1099511627776",
    "depth": 4,
    "witness_depth": 4,
    "refinement_rounds": 64,
    "alpha_search_bound": 64,
    "target_search_limit": 256,
    "oracle_max_rank": 6,
    "oracle_max_dim": 5000,
    "log_level": "WARNING",
    "log_dir": None,
}


def get_config_path(config_path=None):
    """Explicit path, then $DLA_CONFIG, then dla_config.json in the working directory"""
    if config_path:
        return config_path
    return os.environ.get(CONFIG_ENV) or os.path.join(os.getcwd(), DEFAULT_CONFIG_FILE)


class ConfigManager:
    def __init__(self, config_path=None):
        self.config_path = get_config_path(config_path)
        self.config = self.load_config()

    def load_config(self):
        """Load configuration from file, falling back to the defaults"""
        config = dict(DEFAULTS)
        if not os.path.exists(self.config_path):
            return config
        try:
            with open(self.config_path, encoding='utf-8') as f:
                stored = json.load(f)
        except (OSError, ValueError) as e:
            logger.warning(f"Failed to load config {self.config_path}: {e}")
            return config
        if not isinstance(stored, dict):
            logger.warning(f"Ignoring config {self.config_path}: not a JSON object")
            return config
        for key, value in stored.items():
            if key in DEFAULTS:
                config[key] = value
            else:
                logger.warning(f"Unknown config key ignored: {key}")
        return config

    def save_config(self, config=None):
        """Save configuration to file"""
        if config is None:
            config = self.config
        with open(self.config_path, 'w', encoding='utf-8') as f:
            json.dump(config, f, indent=4)
        logger.info(f"Config saved to {self.config_path}")

    def update_settings(self, **kwargs):
        """Override known settings in memory; None values leave a setting unchanged"""
        for key, value in kwargs.items():
            if key in self.config and value is not None:
                self.config[key] = value

    @property
    def precision(self):
        value = self.config.get("precision", DEFAULTS["precision"])
        try:
            precision = parse_rational(str(value))
        except ParseError as e:
            raise ParseError(f"precision setting: {e.message}") from e
        if precision <= 0:
            raise ParseError(f"precision must be positive, got {precision}")
        return precision

    @property
    def depth(self):
        return int(self.config.get("depth", DEFAULTS["depth"]))

    @property
    def witness_depth(self):
        return int(self.config.get("witness_depth", DEFAULTS["witness_depth"]))

    @property
    def refinement_rounds(self):
        return int(self.config.get("refinement_rounds", DEFAULTS["refinement_rounds"]))

    @property
    def alpha_search_bound(self):
        return int(self.config.get("alpha_search_bound", DEFAULTS["alpha_search_bound"]))

    @property
    def target_search_limit(self):
        return int(self.config.get("target_search_limit", DEFAULTS["target_search_limit"]))

    @property
    def oracle_max_rank(self):
        return int(self.config.get("oracle_max_rank", DEFAULTS["oracle_max_rank"]))

    @property
    def oracle_max_dim(self):
        return int(self.config.get("oracle_max_dim", DEFAULTS["oracle_max_dim"]))

    @property
    def log_level(self):
        return str(self.config.get("log_level", DEFAULTS["log_level"])).upper()

    @property
    def log_dir(self):
        return self.config.get("log_dir")
