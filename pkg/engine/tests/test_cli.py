import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stdout
from unittest import mock

import jsonschema

import autsub
from autsub.lib.autsub_cli import get_parser, run
from autsub.lib.autsub_config import AutsubConfig
from autsub.lib.autsub_report import SCHEMA_FILE

SAMPLES = os.path.join(os.path.dirname(autsub.__file__), "samples")


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.home = tempfile.mkdtemp()
        patcher = mock.patch.dict(os.environ,
                                  {AutsubConfig.HOME_ENV: self.home})
        patcher.start()
        self.addCleanup(patcher.stop)
        self.addCleanup(shutil.rmtree, self.home)
        with open(SCHEMA_FILE) as f:
            self.schema = json.load(f)

    def sample(self, name):
        return os.path.join(SAMPLES, name)

    def write(self, name, text):
        path = os.path.join(self.home, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def invoke(self, *argv):
        out = io.StringIO()
        code = run(list(argv), stdout=out)
        return code, out.getvalue()

    def invoke_json(self, *argv):
        code, text = self.invoke(*argv, "--format", "json", "--quiet")
        data = json.loads(text)
        jsonschema.validate(data, self.schema)
        return code, data

    def test_analyze(self):
        """analyze reports the column invariants as json"""
        code, data = self.invoke_json("analyze",
                                      self.sample("coincidence.sub"))
        self.assertEqual(code, 0)
        result = data["result"]
        self.assertEqual((result["c"], result["j"]), (1, 1))
        self.assertEqual(result["periodic_count"], 4)
        self.assertEqual(result["denominator_bound"], 3)
        self.assertEqual(result["one_sided"]["status"], "trivial")
        self.assertEqual(data["command"], "analyze")
        self.assertEqual(data["version"], autsub.__version__)

    def test_analyze_text(self):
        code, text = self.invoke("analyze", self.sample("thue_morse.sub"),
                                 "--quiet")
        self.assertEqual(code, 0)
        self.assertIn("column number c: 2", text)
        self.assertIn("sigma empty: True", text)

    def test_analyze_finite(self):
        path = self.write("finite.sub", "a -> ab\nb -> ab\n")
        code, data = self.invoke_json("analyze", path)
        self.assertEqual(code, 0)
        self.assertFalse(data["result"]["infinite"])
        self.assertNotIn("c", data["result"])

    def test_aut(self):
        code, data = self.invoke_json("aut", self.sample("thue_morse.sub"))
        self.assertEqual(code, 0)
        result = data["result"]
        self.assertEqual(result["iso_type"], "Z × Z/2")
        self.assertEqual(result["quotient_order"], 2)
        self.assertEqual(result["dependence"], {"K0": [0, 0], "K1": [0, 0]})

    def test_aut_root(self):
        code, data = self.invoke_json("aut", self.sample("shift_root.sub"))
        self.assertEqual(code, 0)
        result = data["result"]
        self.assertEqual(result["root"]["kappa"], {"num": -1, "den": 2})
        self.assertEqual(result["relations"][0], "G^2 = σ^-1")
        code, text = self.invoke("aut", self.sample("shift_root.sub"),
                                 "--quiet")
        self.assertIn("Aut ≅ Z", text)
        self.assertIn("κ = -1/2 = (1)", text)

    def test_aut_is_reproducible(self):
        path = self.sample("shift_root.sub")
        first = self.invoke("aut", path, "--format", "json", "--quiet")
        second = self.invoke("aut", path, "--format", "json", "--quiet",
                             "--jobs", "2")
        self.assertEqual(first, second)

    def test_conj_exit_codes(self):
        finite = self.write("finite.sub", "a -> ab\nb -> ab\n")
        cases = [
            (("shift_root.sub", "shift_root_pqr.sub"), 0, "conjugate"),
            (("coincidence.sub", "thue_morse.sub"), 1, "not-conjugate"),
        ]
        for (first, second), expected, decision in cases:
            code, data = self.invoke_json("conj", self.sample(first),
                                          self.sample(second))
            self.assertEqual(code, expected)
            self.assertEqual(data["result"]["decision"], decision)
        code, data = self.invoke_json("conj", finite, finite)
        self.assertEqual(code, 2)
        self.assertEqual(data["result"]["decision"], "incompatible-input")

    def test_language(self):
        code, text = self.invoke("language", self.sample("coincidence.sub"),
                                 "-n", "2", "--quiet")
        self.assertEqual(code, 0)
        self.assertEqual(text.split(),
                         ["ab", "ac", "ba", "bb", "bc", "cb", "cc"])
        code, data = self.invoke_json("language",
                                      self.sample("thue_morse.sub"),
                                      "-n", "3")
        self.assertEqual(data["result"]["count"], 6)

    def test_graph(self):
        code, text = self.invoke("graph", self.sample("coincidence.sub"),
                                 "--format", "dot", "--quiet")
        self.assertEqual(code, 0)
        self.assertTrue(text.startswith("digraph subsets {"))
        self.assertIn('[label="{a,b,c}"]', text)
        code, data = self.invoke_json("graph", self.sample("thue_morse.sub"))
        self.assertTrue(data["result"]["sigma_empty"])

    def test_dot_unavailable(self):
        code, _ = self.invoke("language", self.sample("thue_morse.sub"),
                              "-n", "2", "--format", "dot", "--quiet")
        self.assertEqual(code, 2)

    def test_bad_input(self):
        path = self.write("bad.sub", "a -> ab\nb -> b\n")
        code, data = self.invoke_json("aut", path)
        self.assertEqual(code, 2)
        self.assertEqual(data["error"]["type"], "SubstitutionParseError")
        self.assertFalse(data["result"]["authoritative"])
        code, text = self.invoke("aut", os.path.join(self.home, "missing"),
                                 "--quiet")
        self.assertEqual((code, text), (2, ""))

    def test_non_primitive(self):
        path = self.write("reducible.sub", "a -> aa\nb -> ab\n")
        code, data = self.invoke_json("aut", path)
        self.assertEqual(code, 2)
        self.assertEqual(data["error"]["type"], "PreconditionError")

    def test_cap_reached(self):
        code, data = self.invoke_json("aut", self.sample("shift_root.sub"),
                                      "--cap-word", "10")
        self.assertEqual(code, 3)
        self.assertEqual(data["error"]["cap"], "word")

    def test_invalid_cap(self):
        with self.assertRaises(SystemExit):
            with redirect_stdout(io.StringIO()), \
                    mock.patch("sys.stderr", io.StringIO()):
                get_parser().parse_args(["aut", "x.sub", "--cap-word", "0"])

    def test_config_command(self):
        out = io.StringIO()
        with redirect_stdout(out):
            code = run(["config", "--jobs", "3", "--cap-radius", "5"])
        self.assertEqual(code, 0)
        shown = json.loads(out.getvalue())
        self.assertEqual((shown["jobs"], shown["cap_radius"]), (3, 5))
        self.assertEqual(AutsubConfig().limits().radius, 5)
