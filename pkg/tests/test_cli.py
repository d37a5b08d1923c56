"""
Tests for the command line entry point and its exit statuses.
"""

import json
import logging
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from common.app_setup import check_dependencies
from common.json_codec import read_json
from ingest.series_io import write_columns_csv
from main import main
from pipeline.validate import BatteryResult
from synth.fgn import FgnSpec, gen_fgn
from synth.var import VarSpec, gen_var

BUNDLED_CONFIG = Path(__file__).parent.parent / "data" / "config.yaml"


class CliTestCase(unittest.TestCase):
    """Runs main() against a temporary output directory"""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.temp_dir.name)
        self.out = self.root / "out"

    def tearDown(self):
        root_logger = logging.getLogger()
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()
        self.temp_dir.cleanup()

    def run_cli(self, *args: str) -> int:
        with patch('sys.stdout'), patch('sys.stderr'):
            return main(["--output", str(self.out), "--quiet", *args])


class TestUsage(CliTestCase):
    """Configuration and usage errors exit with status 1"""

    def test_unknown_command(self):
        with patch('sys.stderr'), self.assertRaises(SystemExit) as ctx:
            main(["plot"])
        self.assertEqual(ctx.exception.code, 1)

    def test_missing_corpus(self):
        self.assertEqual(self.run_cli("ingest", "--corpus", str(self.root / "absent.jsonl"),
                                      "--keywords", str(self.root / "absent.csv")), 1)

    def test_empty_keyword_list(self):
        keywords = self.root / "keywords.csv"
        keywords.write_text("canonical,surface_forms\n", encoding="utf-8")
        corpus = BUNDLED_CONFIG.parent / "mini_corpus.jsonl"
        self.assertEqual(self.run_cli("ingest", "--corpus", str(corpus), "--keywords", str(keywords)), 1)

    def test_invalid_override(self):
        self.assertEqual(self.run_cli("--config", str(BUNDLED_CONFIG), "analyze", "--alpha", "2"), 1)

    def test_missing_config_file(self):
        self.assertEqual(self.run_cli("--config", str(self.root / "absent.yaml"), "ingest"), 1)

    def test_zero_validation_reps(self):
        self.assertEqual(self.run_cli("validate", "--battery", "hurst", "--reps", "0"), 1)

    def test_fgn_length_must_be_power_of_two(self):
        self.assertEqual(self.run_cli("synth", "fgn", "--n", "100"), 1)


class TestDependencies(CliTestCase):
    """The dependency check runs before any command module is needed"""

    def test_missing_package_is_reported(self):
        with patch.dict('sys.modules', {'lz4': None}), patch('sys.stderr') as stderr:
            self.assertFalse(check_dependencies())
        printed = "".join(str(call.args[0]) for call in stderr.write.call_args_list)
        self.assertIn("lz4", printed)

    def test_main_stops_before_running_a_command(self):
        with patch('main.check_dependencies', return_value=False), patch('cli.run') as run:
            self.assertEqual(main(["validate"]), 1)
        run.assert_not_called()


class TestData(CliTestCase):
    """Malformed input exits with status 2"""

    def test_unknown_document_type(self):
        corpus = self.root / "corpus.jsonl"
        record = {"id": "e1", "date": "1950-01-01", "type": "editorial", "source": "De Tijd", "text": "radio"}
        corpus.write_text(json.dumps(record) + "\n", encoding="utf-8")
        self.assertEqual(self.run_cli("ingest", "--corpus", str(corpus),
                                      "--keywords", str(BUNDLED_CONFIG.parent / "keywords.csv")), 2)

    def test_non_numeric_series(self):
        series = self.root / "series.csv"
        series.write_text("value\n0.1\nabc\n", encoding="utf-8")
        self.assertEqual(self.run_cli("afa", str(series)), 2)


class TestCommands(CliTestCase):
    """Successful runs and the files they write"""

    def test_ingest_bundled_corpus(self):
        self.assertEqual(self.run_cli("--config", str(BUNDLED_CONFIG), "ingest"), 0)
        self.assertEqual(len(list((self.out / "series").glob("*.csv"))), 10)
        self.assertTrue((self.out / "discourse-dynamics.log").is_file())

    def test_afa(self):
        series = self.root / "fgn.csv"
        write_columns_csv(series, ["value"], [gen_fgn(FgnSpec(1024, 0.7, seed=3))])
        self.assertEqual(self.run_cli("afa", str(series)), 0)
        result = read_json(self.out / "afa.json")
        self.assertAlmostEqual(result['hurst'], 0.7, delta=0.15)
        self.assertEqual(result['n'], 1024)
        self.assertTrue((self.out / "afa_scaling.csv").is_file())

    def test_afa_too_short(self):
        series = self.root / "short.csv"
        series.write_text("1\n2\n3\n", encoding="utf-8")
        self.assertEqual(self.run_cli("afa", str(series)), 3)

    def test_granger(self):
        x, y = gen_var(VarSpec(300, a_xx=0.2, a_yy=0.2, a_xy=0.8, seed=5))
        write_columns_csv(self.root / "x.csv", ["value"], [x])
        write_columns_csv(self.root / "y.csv", ["value"], [y])
        self.assertEqual(self.run_cli("granger", str(self.root / "x.csv"), str(self.root / "y.csv"),
                                      "--fixed-lag", "2"), 0)
        result = read_json(self.out / "granger.json")
        self.assertEqual(result['lag'], 2)
        self.assertLess(result['p_xy'], 0.005)
        self.assertIn(result['causal_class'], ("shaping", "complex"))

    def test_synth_var(self):
        self.assertEqual(self.run_cli("--seed", "7", "synth", "var", "--n", "50"), 0)
        lines = (self.out / "var.csv").read_text(encoding="utf-8").splitlines()
        self.assertEqual((lines[0], len(lines)), ("x,y", 51))
        metadata = read_json(self.out / "var.meta.json")
        self.assertEqual((metadata['seed'], metadata['rng'], metadata['integrated']), (7, "PCG64", False))

    def test_synth_var_integrated(self):
        self.assertEqual(self.run_cli("--seed", "7", "synth", "var", "--n", "50", "--integrated"), 0)
        self.assertTrue(read_json(self.out / "var.meta.json")['integrated'])

    def test_synth_var_unstable(self):
        self.assertEqual(self.run_cli("synth", "var", "--axx", "1.0"), 3)

    def test_synth_corpus_then_ingest(self):
        self.assertEqual(self.run_cli("synth", "corpus", "--n", "30", "--keyword", "fiets"), 0)
        keywords = self.root / "keywords.csv"
        keywords.write_text("canonical,surface_forms\nfiets,fiets|fietsen\n", encoding="utf-8")
        self.assertEqual(self.run_cli("ingest", "--corpus", str(self.out / "corpus.jsonl"),
                                      "--keywords", str(keywords), "--bin-width", "1"), 0)
        self.assertTrue((self.out / "series" / "fiets__advertisement.csv").is_file())
        self.assertEqual(read_json(self.out / "corpus.meta.json")['documents'], 60)

    def test_validate_writes_table(self):
        self.assertEqual(self.run_cli("validate", "--battery", "group-regression"), 0)
        results = read_json(self.out / "validation.json")['results']
        self.assertEqual([r['battery'] for r in results], ["H group regression"])
        self.assertTrue(results[0]['passed'])

    def test_failed_validation(self):
        failing = [BatteryResult("granger power", "x->y", 0.5, "power > 0.95", False)]
        with patch('cli.run_validation', return_value=failing):
            self.assertEqual(self.run_cli("validate", "--battery", "power"), 3)


if __name__ == '__main__':
    unittest.main()
