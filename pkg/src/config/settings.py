"""
Configuration settings for the GHZ network nonlocality toolkit
"""

import os
from pathlib import Path

# Try to load .env file if python-dotenv is available
try:
    from dotenv import load_dotenv
    # Load .env file from project root
    env_path = Path(__file__).parent.parent.parent / '.env'
    if env_path.exists():
        load_dotenv(env_path)
except ImportError:
    # python-dotenv not installed, skip .env loading
    pass


class Config:
    """Main configuration class"""

    # Application settings
    APP_NAME = os.getenv("APP_NAME", "GHZ Network Nonlocality Toolkit")
    APP_VERSION = os.getenv("APP_VERSION", "1.0.1")

    # Numeric tolerances
    STATE_TOLERANCE = float(os.getenv("STATE_TOLERANCE", "1e-12"))  # norm, trace, hermiticity
    EIGEN_TOLERANCE = float(os.getenv("EIGEN_TOLERANCE", "1e-10"))  # dichotomic eigenvalues
    PSD_TOLERANCE = float(os.getenv("PSD_TOLERANCE", "1e-10"))  # smallest allowed eigenvalue, negated
    PROBABILITY_TOLERANCE = float(os.getenv("PROBABILITY_TOLERANCE", "1e-9"))
    SINGULAR_EPSILON = float(os.getenv("SINGULAR_EPSILON", "1e-6"))  # floor for 1 + <C1>
    MAX_QUBITS = int(os.getenv("MAX_QUBITS", "16"))

    # Statistics
    DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "20220517"))
    DEFAULT_RESAMPLES = int(os.getenv("DEFAULT_RESAMPLES", "10000"))
    MIN_RESAMPLES = 100
    MIN_MC_SAMPLES = 50
    BOOTSTRAP_BATCH = int(os.getenv("BOOTSTRAP_BATCH", "500"))  # resamples per substream
    WORKERS = int(os.getenv("WORKERS", "4"))
    INSTABILITY_FRACTION = float(os.getenv("INSTABILITY_FRACTION", "0.01"))

    # Trial simulation
    SIMULATION_BATCH = int(os.getenv("SIMULATION_BATCH", "1000000"))  # pulses per substream

    # Space-time analysis (m/ns)
    LIGHT_SPEED_PRINTED = 0.299792
    LIGHT_SPEED_EXACT = 0.299792458

    # Bounds of the F functional
    CLASSICAL_BOUND = 2.0
    QUANTUM_MAX = 2.0 * 2.0 ** 0.5

    # Logging settings
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")  # DEBUG, INFO, WARNING, ERROR, CRITICAL
    LOG_FILE = os.getenv("LOG_FILE", None)  # Path to log file, None for console only
    LOGGER_NAME = os.getenv("LOGGER_NAME", "ghz_nonlocality")
    LOG_FORMAT = os.getenv("LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    LOG_DATE_FORMAT = os.getenv("LOG_DATE_FORMAT", "%Y-%m-%d %H:%M:%S")

    @classmethod
    def validate(cls) -> tuple[bool, list[str]]:
        """
        Validate configuration settings

        Returns:
            tuple: (is_valid, list_of_errors)
        """
        errors = []

        for name in ("STATE_TOLERANCE", "EIGEN_TOLERANCE", "PSD_TOLERANCE",
                     "PROBABILITY_TOLERANCE", "SINGULAR_EPSILON"):
            value = getattr(cls, name)
            if not isinstance(value, float) or not 0 < value < 1e-2:
                errors.append(f"{name} must be a small positive float, got {value}")

        if not isinstance(cls.MAX_QUBITS, int) or cls.MAX_QUBITS < 2:
            errors.append(f"MAX_QUBITS must be an integer >= 2, got {cls.MAX_QUBITS}")

        if cls.DEFAULT_RESAMPLES < cls.MIN_RESAMPLES:
            errors.append(f"DEFAULT_RESAMPLES must be >= {cls.MIN_RESAMPLES}, got {cls.DEFAULT_RESAMPLES}")

        if cls.BOOTSTRAP_BATCH < 1:
            errors.append(f"BOOTSTRAP_BATCH must be positive, got {cls.BOOTSTRAP_BATCH}")

        if cls.SIMULATION_BATCH < 1:
            errors.append(f"SIMULATION_BATCH must be positive, got {cls.SIMULATION_BATCH}")

        if cls.WORKERS < 1:
            errors.append(f"WORKERS must be positive, got {cls.WORKERS}")

        if not 0 < cls.INSTABILITY_FRACTION < 1:
            errors.append(f"INSTABILITY_FRACTION must be in (0, 1), got {cls.INSTABILITY_FRACTION}")

        # Validate LOG_LEVEL
        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if cls.LOG_LEVEL not in valid_log_levels:
            errors.append(f"LOG_LEVEL must be one of {valid_log_levels}, got {cls.LOG_LEVEL}")

        if "%(message)s" not in cls.LOG_FORMAT:
            errors.append(f"LOG_FORMAT must contain %(message)s, got {cls.LOG_FORMAT!r}")

        return len(errors) == 0, errors


# Environment-specific configurations
class DevelopmentConfig(Config):
    """Development environment configuration"""
    DEBUG = True
    LOG_LEVEL = "DEBUG"


class ProductionConfig(Config):
    """Production environment configuration"""
    DEBUG = False
    LOG_LEVEL = "WARNING"


# Configuration factory
def get_config(env: str = None) -> Config:
    """Get configuration based on environment"""
    if env is None:
        env = os.getenv("ENVIRONMENT", "production")

    config_map = {
        "development": DevelopmentConfig,
        "production": ProductionConfig
    }

    config = config_map.get(env, ProductionConfig)()

    # Validate configuration
    is_valid, errors = config.validate()
    if not is_valid:
        error_msg = "Configuration validation failed:\n" + "\n".join(f"  - {e}" for e in errors)
        raise ValueError(error_msg)

    return config
