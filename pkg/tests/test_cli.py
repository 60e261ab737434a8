import json

from click.testing import CliRunner

from statlim.cli import main

from conftest import COMPANION_ROWS, GOLDEN_ALPHA

runner = CliRunner()
COMPANION_JSON = json.dumps(COMPANION_ROWS)


def _invoke(*args, env=None):
    return runner.invoke(main, list(args), env=env, catch_exceptions=False)


class TestCharpoly:
    def test_quartic_companion(self):
        res = _invoke("charpoly", COMPANION_JSON)
        assert res.exit_code == 0
        assert json.loads(res.output) == {"coefficients": [1, 0, -2, 0, 9]}

    def test_bad_json_is_usage_error(self):
        res = runner.invoke(main, ["charpoly", "not json"])
        assert res.exit_code == 2

    def test_missing_argument_is_usage_error(self):
        res = runner.invoke(main, ["charpoly"])
        assert res.exit_code == 2


class TestDivisible:
    def test_divisible_with_verify(self):
        res = _invoke("divisible", "[[3,0],[0,3]]", "-p", "3", "--verify")
        body = json.loads(res.output)
        assert body["divisible"] is True and body["witness_power"] == 1
        assert body["verify"]["agrees"] is True

    def test_not_divisible(self):
        res = _invoke("divisible", COMPANION_JSON, "-p", "3")
        body = json.loads(res.output)
        assert body["divisible"] is False
        assert "witness_power" not in body  # nulls are dropped

    def test_composite_prime_is_domain_error(self):
        res = _invoke("divisible", "[[2]]", "-p", "6")
        assert res.exit_code == 1
        assert json.loads(res.output)["error"]["code"] == "argument"


class TestUnitSplit:
    def test_matrix_form(self):
        res = _invoke("unit-split", COMPANION_JSON, "-p", "3", "-N", "10")
        body = json.loads(res.output)
        assert body["k"] == 2 and body["chi1"] == [1, 0, GOLDEN_ALPHA]

    def test_polynomial_form(self):
        res = _invoke("unit-split", "[1,0,-2,0,9]", "-p", "3", "-N", "10",
                      "--polynomial")
        assert json.loads(res.output)["chi1"] == [1, 0, GOLDEN_ALPHA]


class TestFunctionals:
    def test_quartic_companion(self):
        res = _invoke("functionals", COMPANION_JSON, "-p", "3", "-N", "10")
        body = json.loads(res.output)
        na = (-GOLDEN_ALPHA) % 3 ** 10
        assert body["rank"] == 2
        assert body["basis"] == [[1, 0, na, 0], [0, 1, 0, na]]

    def test_precision_env_var(self):
        res = _invoke("functionals", "[[2]]", "-p", "3",
                      env={"STATLIM_PRECISION": "5"})
        assert json.loads(res.output)["N"] == 5

    def test_bad_env_var_is_domain_error(self):
        res = _invoke("functionals", "[[2]]", "-p", "3",
                      env={"STATLIM_PRECISION": "huge"})
        assert res.exit_code == 1


class TestDp:
    def test_capped(self):
        res = _invoke("dp", "[[6]]", "[1]", "[0]", "-p", "3", "-N", "8",
                      "--verify")
        body = json.loads(res.output)
        assert body["distance"] == "<=3^-8" and body["verify"]["agrees"] is True

    def test_unit_distance(self):
        res = _invoke("dp", "[[2]]", "[5]", "[0]", "-p", "3", "-N", "8")
        assert json.loads(res.output)["distance"] == "3^-0"

    def test_nonmember_input_is_domain_error(self):
        res = _invoke("dp", "[[2]]", '["1/3"]', "[0]", "-p", "3")
        assert res.exit_code == 1


class TestMember:
    def test_member_true(self):
        res = _invoke("member", "[[2]]", '["1/2"]', "--verify")
        body = json.loads(res.output)
        assert res.exit_code == 0
        assert body["member"] is True and body["certificate"] == 1

    def test_member_false_still_succeeds(self):
        res = _invoke("member", "[[2]]", '["1/3"]')
        assert res.exit_code == 0
        assert json.loads(res.output)["member"] is False

    def test_singular_matrix_is_domain_error(self):
        res = _invoke("member", "[[0]]", "[1]")
        assert res.exit_code == 1


class TestCorank:
    def test_quartic_companion(self):
        res = _invoke("corank", COMPANION_JSON, "-p", "3")
        assert json.loads(res.output) == {"corank": 2}


class TestLimitApprox:
    def test_stage_two(self):
        res = _invoke("limit-approx", "[[[3]],[[3]]]", "-p", "3", "-N", "4",
                      "-n", "2")
        body = json.loads(res.output)
        assert body["basis"] == [[9]] and body["stage"] == 2

    def test_stage_out_of_range(self):
        res = _invoke("limit-approx", "[[[3]]]", "-p", "3", "-n", "5")
        assert res.exit_code == 1


class TestQuasiCommands:
    def test_power_congruence(self):
        res = _invoke("power-congruence", "[[1,1],[0,1]]", "-m", "2")
        assert json.loads(res.output) == {"k": 2, "l": 0}

    def test_adjoin(self):
        res = _invoke("adjoin", "[[5]]", '["1/2"]')
        body = json.loads(res.output)
        assert abs(body["matrix"][0][0]) == 5

    def test_quasi_rebuild(self):
        data = json.dumps({"n": 2, "alpha": [[2]], "beta": [[1]]})
        res = _invoke("quasi-rebuild", "[[5]]", data, '["1/2"]')
        assert abs(json.loads(res.output)["matrix"][0][0]) == 5

    def test_quasi_rebuild_missing_keys(self):
        res = runner.invoke(main, ["quasi-rebuild", "[[5]]", '{"n": 2}'])
        assert res.exit_code == 2


class TestDeterminism:
    def test_byte_identical_output(self):
        a = _invoke("functionals", COMPANION_JSON, "-p", "3", "-N", "12").output
        b = _invoke("functionals", COMPANION_JSON, "-p", "3", "-N", "12").output
        assert a == b

    def test_sorted_compact_json(self):
        out = _invoke("corank", "[[2]]", "-p", "3").output.strip()
        assert out == '{"corank":1}'
