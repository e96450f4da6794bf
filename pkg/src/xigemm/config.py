"""Small ini-style settings file shared by the CLI commands.

    [xigemm]
    eta = 0.31
    threshold = 0.5
    density_limit = 0.31

``density_limit`` falls back to ``eta`` when absent.
"""
import configparser

SECTION = "xigemm"
KEYS = ("eta", "threshold", "density_limit")


def read_config(path):
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(path)
    if SECTION not in parser:
        return {}
    sec = parser[SECTION]
    out = {k: sec.getfloat(k) for k in KEYS if k in sec}
    if "density_limit" not in out and "eta" in out:
        out["density_limit"] = out["eta"]
    return out


def write_config(path, values, info=None):
    """Write ``values`` (floats) and optional string ``info`` to ``path``."""
    parser = configparser.ConfigParser()
    parser[SECTION] = {k: repr(float(v)) for k, v in values.items()}
    if info:
        parser["machine"] = {k: str(v) for k, v in info.items()}
    with open(path, "w") as fh:
        parser.write(fh)
