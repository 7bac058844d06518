import json
import os
import time
from pathlib import Path

import pytest

from polytorus.experiment import ExperimentConfig, run_experiment

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class SuiteRun:
    def __init__(self, config, result, elapsed, out_dir):
        self.config = config
        self.result = result
        self.elapsed = elapsed
        self.out_dir = out_dir


def _run_default_suite(name, tmp_path_factory, tag):
    cfg_dict = json.load(open(CONFIG_DIR / name))
    out_dir = str(tmp_path_factory.mktemp(tag))
    cfg_dict["out_dir"] = out_dir
    cfg = ExperimentConfig.from_dict(cfg_dict)
    t0 = time.perf_counter()
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    return SuiteRun(cfg, result, elapsed, out_dir)


@pytest.fixture(scope="session")
def suite_n1(tmp_path_factory):
    return _run_default_suite("default_suite_n1.json", tmp_path_factory, "suite-n1")


@pytest.fixture(scope="session")
def suite_n2(tmp_path_factory):
    return _run_default_suite("default_suite_n2.json", tmp_path_factory, "suite-n2")
