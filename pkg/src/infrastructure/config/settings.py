from decouple import config

LOG_LEVEL = config("FRACMUSIELAK_LOG_LEVEL", default="INFO")
LOG_FILE = config("FRACMUSIELAK_LOG_FILE", default="")

OUTPUT_DIR = config("FRACMUSIELAK_OUTPUT_DIR", default="results")
DEFAULT_SEED = config("FRACMUSIELAK_DEFAULT_SEED", default=20240601, cast=int)

# Pairing constant M of the Hölder-type inequality; also the factor in the sup-norm constant.
HOLDER_FACTOR = config("FRACMUSIELAK_HOLDER_FACTOR", default=2.0, cast=float)
