from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="NONLOC_", env_file=".env")

    # Reproducibility
    SEED: int = 0

    # Hardy test tolerances
    EPS_ZERO: float = 1e-9
    DELTA_POS: float = 1e-6

    # Polytope / LP tolerances
    NS_TOL: float = 1e-8
    LP_TOL: float = 1e-9
    CERT_TOL: float = 1e-12

    # State limits
    MAX_PARTIES: int = 8
    ENTANGLEMENT_EPS: float = 1e-4

    # Numerical settings search
    SEARCH_MULTISTARTS: int = 32
    SEARCH_MAX_ITERS: int = 2000
    SEARCH_PENALTY: float = 0.1
    SEARCH_EPS_ZERO: float = 1e-10
    SEARCH_DELTA_POS: float = 1e-4

    # Experiment settings
    LP_SUBSAMPLE: int = 20
    JOBS: int = 1
    PROGRESS: bool = False
    OUTPUT_DIR: str = "./runs"

    LOG_LEVEL: str = "INFO"
    VERSION: str = "1.0.0"

    # Server settings
    HOST: str = "0.0.0.0"
    PORT: int = 8000
    DEBUG: bool = False


settings = Settings()
