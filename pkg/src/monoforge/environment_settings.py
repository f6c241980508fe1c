"""Environment driven settings for the monoforge project.

Every value can be set with an environment variable or in a .env file.
"""
from environs import Env

env = Env()
env.read_env()

DEBUG = env.bool("DJANGO_DEBUG", default=False)
SECRET_KEY = env.str("DJANGO_SECRET_KEY", default="monoforge-insecure-development-key")
ALLOWED_HOSTS = env.list("DJANGO_ALLOWED_HOSTS", default=["127.0.0.1", "localhost", "testserver"])

DJANGO_LOG_LEVEL = env.log_level("DJANGO_LOG_LEVEL", default="INFO")
MONO_FORGE_LOG_LEVEL = env.log_level("MONO_FORGE_LOG_LEVEL", default="INFO")

# worker threads for grid sampling and fiber sweeps
MONO_FORGE_THREADS = env.int("MONO_FORGE_THREADS", default=1, validate=lambda n: n >= 1)

# monomialization defaults, overridable per call
MONO_FORGE_MAX_DEPTH = env.int("MONO_FORGE_MAX_DEPTH", default=64, validate=lambda n: n >= 1)
MONO_FORGE_TRUNC = env.int("MONO_FORGE_TRUNC", default=16, validate=lambda n: n >= 1)
# ceiling for the truncation a run may raise itself to when it runs out of precision
MONO_FORGE_MAX_TRUNC = env.int("MONO_FORGE_MAX_TRUNC", default=32, validate=lambda n: n >= 1)
MONO_FORGE_LAMBDA_SEEDS = env.list("MONO_FORGE_LAMBDA_SEEDS", default=["0", "1", "-1", "inf"])
MONO_FORGE_GRID = env.int("MONO_FORGE_GRID", default=256, validate=lambda n: n >= 1)
MONO_FORGE_CHECK_MEASURE = env.bool("MONO_FORGE_CHECK_MEASURE", default=DEBUG)
