"""Plain-text problem definition files."""

import numpy as np
import pytest

import structbandit as sb
from structbandit.problemfile import ProblemFileError, load_problem

GOOD = """\
# custom two-arm problem
k 2
sigma2 1.0
space interval -1 1 501
amb -1 0
arm 1 pwl -1 0   0 0   1 -1
arm 2 pwl -1 -1  0 -1/0/L  1 0
"""


def write(tmp_path, text, name="problem.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadProblem:
    def test_matches_catalog_equivalent(self, tmp_path, ambiguous_a):
        b = load_problem(write(tmp_path, GOOD))
        assert b.k == 2 and b.sigma2 == 1.0
        assert b.space.resolution == 501
        assert b.space.ambiguous == ((-1.0, 0.0),)
        grid = np.linspace(-1, 1, 81)
        for arm in (0, 1):
            np.testing.assert_allclose(
                b.means[arm].values_on_grid(grid),
                ambiguous_a.means[arm].values_on_grid(grid),
                atol=1e-12,
            )
        assert sb.evaluate_mean(b, 2, 0.0) == -1.0  # left-evaluated jump

    def test_default_resolution(self, tmp_path):
        text = GOOD.replace("space interval -1 1 501", "space interval -1 1")
        b = load_problem(write(tmp_path, text), default_resolution=321)
        assert b.space.resolution == 321

    def test_jump_token_right_default(self, tmp_path):
        text = "k 1\nsigma2 0.5\nspace interval 0 2\narm 1 pwl 0 0  1 1/5  2 5\n"
        b = load_problem(write(tmp_path, text))
        assert sb.evaluate_mean(b, 1, 1.0) == 5.0
        assert b.sigma2 == 0.5

    def test_runs_through_the_harness(self, tmp_path):
        path = write(tmp_path, GOOD)
        cfg = sb.ExperimentConfig(
            problem=str(path), horizon=100, reps=1, seed=0,
            policies=(sb.PolicySpec("ucbs", 4.0),), theta=0.0,
        )
        result = sb.run_experiment(cfg)
        assert result.curves["ucbs"].terminal_mean >= 0.0

    @pytest.mark.parametrize(
        "mutation",
        [
            lambda t: t.replace("k 2", ""),
            lambda t: t.replace("arm 2", "arm 3"),
            lambda t: t.replace("space interval", "space finite"),
            lambda t: t + "bogus 1\n",
            lambda t: t.replace("0 -1/0/L", "0 -1/0/Q"),
            lambda t: t.replace("arm 1 pwl -1 0   0 0   1 -1", "arm 1 pwl -1 0"),
        ],
    )
    def test_rejects_malformed_files(self, tmp_path, mutation):
        with pytest.raises(ProblemFileError):
            load_problem(write(tmp_path, mutation(GOOD)))
