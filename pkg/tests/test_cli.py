#!/usr/bin/env python3

# pylint: disable=missing-docstring
import io
import json
import unittest
import unittest.mock
from typing import List, Optional, Tuple  # pylint: disable=unused-import

import temppathlib

from macromic import cli
from macromic import mutual_info
from macromic import numerics
from macromic import pointers
from macromic import roof
from macromic import spectra
from macromic import verify


def run_cli(argv: List[str]) -> Tuple[int, str]:
    stdout = io.StringIO()
    with unittest.mock.patch('sys.stderr', new_callable=io.StringIO):
        code = cli.main(argv=argv, stdout=stdout)
    return code, stdout.getvalue()


class TestFormatting(unittest.TestCase):
    def test_format_float(self):
        self.assertEqual('1.0', cli.format_float(1.0))
        self.assertEqual('0.333333333333', cli.format_float(1.0 / 3.0))
        self.assertEqual('1e-20', cli.format_float(1e-20))
        self.assertEqual('inf', cli.format_float(float('inf')))

    def test_format_error(self):
        self.assertEqual('0', cli.format_error(0.0))
        self.assertEqual('1.23e-08', cli.format_error(1.2345e-8))

    def test_render_csv(self):
        table = cli.Table(header=['k', 'r', 'flag'], rows=[['inf_proxy', 0.5, True]])
        self.assertEqual("k,r,flag\ninf_proxy,0.5,1\n", cli.render_csv(table))


class TestParsing(unittest.TestCase):
    def test_peaks(self):
        self.assertEqual((3, 2.0), cli.parse_peaks(['k=3', 'N=2']))
        self.assertEqual((1, 1.0), cli.parse_peaks(['1,1']))

    def test_peaks_without_span(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = cli.parse_peaks(['k=1'])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected --peaks to give both k and N, but got: k=1", str(valerr))

    def test_floats(self):
        self.assertEqual([0.5, 1.0], cli.parse_floats('0.5, 1', '--weights'))

        with self.assertRaises(ValueError):
            _ = cli.parse_floats('0.5,x', '--weights')

    def test_density_matrix(self):
        rho = cli.parse_density_matrix('[[[0.5, 0], [0, -0.5]], [[0, 0.5], [0.5, 0]]]')
        self.assertEqual(2, rho.dimension)
        self.assertEqual(-0.5j, complex(rho.entries[0, 1]))


class TestMi(unittest.TestCase):
    def test_two_peaks_square(self):
        code, out = run_cli(['mi', '--peaks', 'k=1', 'N=1', '--square', '--delta', '1.0'])
        self.assertEqual(0, code)
        self.assertEqual("param,mi_bits,method,abs_err\n1.0,1.0,ClosedForm,0\n", out)

    def test_single_peak(self):
        code, out = run_cli(['mi', '--peaks', 'k=0', 'N=1', '--square', '--delta', '1.0'])
        self.assertEqual(0, code)
        self.assertEqual("param,mi_bits,method,abs_err\n1.0,0.0,ClosedForm,0\n", out)

    def test_gaussian(self):
        code, out = run_cli(['mi', '--weights', '0.3,0.7', '--levels', '0,2', '--gauss', '--delta', '0.5', '2'])
        self.assertEqual(0, code)

        ens = spectra.BranchEnsemble([0.3, 0.7], spectra.ObservableSpectrum([0.0, 2.0]))
        lines = out.splitlines()
        self.assertEqual(3, len(lines))
        for line, delta in zip(lines[1:], [0.5, 2.0]):
            info = mutual_info.mutual_information(ens, pointers.PointerModel(pointers.PointerKind.GAUSSIAN, delta))
            self.assertEqual(
                ','.join([cli.format_float(delta), cli.format_float(info.bits), 'Quadrature',
                          cli.format_error(info.est_abs_error)]), line)

    def test_json_error_is_numeric(self):
        code, out = run_cli(['mi', '--peaks', '1,1', '--square', '--delta', '2', '--format', 'json'])
        self.assertEqual(0, code)

        records = json.loads(out)
        self.assertEqual(1, len(records))
        self.assertEqual(['param', 'mi_bits', 'method', 'abs_err'], list(records[0].keys()))
        self.assertEqual(2.0, records[0]['param'])
        self.assertAlmostEqual(0.5, records[0]['mi_bits'], places=12)
        self.assertEqual('ClosedForm', records[0]['method'])
        self.assertIsInstance(records[0]['abs_err'], float)
        self.assertEqual(0.0, records[0]['abs_err'])

    def test_missing_span(self):
        code, _ = run_cli(['mi', '--peaks', 'k=1', '--square', '--delta', '1.0'])
        self.assertEqual(2, code)

    def test_invalid_thread_count(self):
        with unittest.mock.patch.dict('os.environ', {'MACROMIC_THREADS': 'bad'}):
            code, _ = run_cli(['mi', '--peaks', 'k=1', 'N=1', '--square', '--delta', '1.0', '2.0'])
        self.assertEqual(2, code)


class TestMic(unittest.TestCase):
    def test_two_peaks_square(self):
        code, out = run_cli(['mic', '--peaks', 'k=1', 'N=1', '--square', '--b', '0.5', '1.5'])
        self.assertEqual(0, code)

        lines = out.splitlines()
        self.assertEqual(3, len(lines))
        self.assertEqual('b,mic', lines[0])

        b, value = lines[1].split(',')
        self.assertEqual('0.5', b)
        self.assertAlmostEqual(2.0, float(value), delta=1e-4)

        self.assertEqual('1.5,0.0', lines[2])

    def test_non_positive_bits(self):
        code, _ = run_cli(['mic', '--peaks', 'k=1', 'N=1', '--b', '0'])
        self.assertEqual(2, code)


class TestRoof(unittest.TestCase):
    def test_search_workers_split_the_thread_budget(self):
        with unittest.mock.patch.dict('os.environ', {'MACROMIC_THREADS': '4'}):
            budget = numerics.worker_count()
            self.assertEqual(budget, cli.search_workers([0.5]))
            self.assertEqual(max(1, budget // 2), cli.search_workers([0.5, 1.0]))
            self.assertEqual(1, cli.search_workers(list(range(8))))

    def test_sizes_of_a_pure_state(self):
        code, out = run_cli(
            ['roof', '--rho', '[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]', '--square', '--b', '0.5', '--format',
             'json'])
        self.assertEqual(0, code)

        records = json.loads(out)
        self.assertEqual(1, len(records))
        self.assertAlmostEqual(2.0, records[0]['mic_prime'], delta=1e-4)
        self.assertGreaterEqual(records[0]['qfi_bound'], 0.0)

    def test_widths(self):
        code, out = run_cli(['roof', '--rho', '[[[0.6, 0], [0.3, 0]], [[0.3, 0], [0.4, 0]]]', '--square', '--delta',
                             '2'])
        self.assertEqual(0, code)

        expected = roof.direct_roof_mi(
            rho=spectra.DensityMatrix([[0.6, 0.3], [0.3, 0.4]]),
            spectrum=spectra.ObservableSpectrum([0.0, 1.0]),
            model=pointers.PointerModel(kind=pointers.PointerKind.SQUARE, delta=2.0))
        self.assertEqual("delta,roof_mi_bits\n2.0,{}\n".format(cli.format_float(expected)), out)

    def test_state_from_file(self):
        with temppathlib.TemporaryDirectory() as tmp_dir:
            path = tmp_dir.path / 'rho.json'
            path.write_text('[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]', encoding='utf-8')

            code, out = run_cli(['roof', '--rho', str(path), '--square', '--delta', '1'])

        self.assertEqual(0, code)

        lines = out.splitlines()
        self.assertEqual(['delta,roof_mi_bits'], lines[:1])
        delta, bits = lines[1].split(',')
        self.assertEqual('1.0', delta)
        self.assertAlmostEqual(1.0, float(bits), places=9)

    def test_both_sweeps(self):
        code, _ = run_cli(['roof', '--rho', '[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]', '--delta', '1', '--b', '0.5'])
        self.assertEqual(2, code)


class TestDiscord(unittest.TestCase):
    def test_widths(self):
        code, out = run_cli(['discord', '--rho', '[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]', '--delta', '1'])
        self.assertEqual(0, code)
        self.assertTrue(out.startswith("delta,c_delta_bits,relative_entropy_bound\n1.0,"), out)

    def test_levels_must_match(self):
        code, _ = run_cli(
            ['discord', '--rho', '[[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]', '--levels', '0,1,2', '--b', '0.5'])
        self.assertEqual(2, code)


class TestFragility(unittest.TestCase):
    def test_header_and_verdict(self):
        code, out = run_cli(['fragility', '--weights', '0.5,0.5', '--levels', '0,1', '--delta', '1', '--format',
                             'json'])
        self.assertEqual(0, code)

        records = json.loads(out)
        self.assertEqual([
            'delta', 'ef_bits', 'environment_mi_bits', 'avg_branch_entropy', 'bound', 'holds', 'distillable_bits'
        ], list(records[0].keys()))
        self.assertEqual(1, records[0]['holds'])
        self.assertAlmostEqual(1.0, records[0]['ef_bits'], places=12)


class TestFig2(unittest.TestCase):
    def test_explicit_grid(self):
        code, out = run_cli(['fig2', '--k', '1', '--r', '0.5', '1', '--no-inf-proxy'])
        self.assertEqual(0, code)
        self.assertEqual("k,r,mi_bits\n1,0.5,1.0\n1,1.0,0.5\n", out)

    def test_default_ratios(self):
        code, out = run_cli(['fig2', '--k', '1'])
        self.assertEqual(0, code)

        lines = out.splitlines()
        self.assertEqual(1 + 80, len(lines))
        self.assertTrue(lines[-1].startswith('inf_proxy,2.0,'), lines[-1])

    def test_invalid_k(self):
        code, _ = run_cli(['fig2', '--k', '0'])
        self.assertEqual(2, code)


class TestFig3(unittest.TestCase):
    def test_points(self):
        code, out = run_cli(['fig3', '--b', '0.3', '--x', '0.2', '0.6', '--z', '0.8', '--format', 'json'])
        self.assertEqual(0, code)

        records = json.loads(out)
        self.assertEqual(2, len(records))
        self.assertEqual(0.0, records[0]['mic'])
        self.assertAlmostEqual(roof.pure_mic_2peak(x=0.6, b=0.3, span=1.0), records[1]['mic'], delta=1e-6)

    def test_points_outside_the_disk_are_skipped(self):
        with self.assertLogs('macromic.cli', level='WARNING'):
            code, out = run_cli(['fig3', '--b', '0.3', '--x', '0.9', '--z', '0.9'])

        self.assertEqual(0, code)
        self.assertEqual("b,x_rho,z_rho,mic\n", out)


class TestVerify(unittest.TestCase):
    def test_passing_suite(self):
        code, out = run_cli(['verify', '--suite', 'dephasing-semigroup', '--trials', '5'])
        self.assertEqual(0, code)

        report = json.loads(out)
        self.assertEqual('dephasing-semigroup', report['suite'])
        self.assertEqual(5, report['trials'])
        self.assertEqual(0, report['failures'])

    def test_all_suites(self):
        code, out = run_cli(['verify', '--suite', 'all', '--trials', '2'])
        self.assertEqual(0, code)

        reports = json.loads(out)
        self.assertEqual(list(verify.SUITES.keys()), [report['suite'] for report in reports])
        self.assertTrue(all(report['trials'] == 2 for report in reports))

    def test_unknown_suite(self):
        code, _ = run_cli(['verify', '--suite', 'no-such-suite'])
        self.assertEqual(2, code)


class TestMain(unittest.TestCase):
    def test_no_command(self):
        code, _ = run_cli([])
        self.assertEqual(2, code)

    def test_unknown_flag(self):
        code, _ = run_cli(['mi', '--no-such-flag'])
        self.assertEqual(2, code)

    def test_output_file_and_manifest(self):
        with temppathlib.TemporaryDirectory() as tmp_dir:
            path = tmp_dir.path / 'sub' / 'fig2.csv'
            argv = ['fig2', '--k', '1', '3', '--r', '0.25', '0.75', '--output', str(path)]

            code, out = run_cli(argv)
            self.assertEqual(0, code)
            self.assertEqual('', out)

            first = path.read_bytes()
            manifest_path = path.parent / 'fig2.csv.manifest.json'
            manifest = json.loads(manifest_path.read_text(encoding='utf-8'))
            first_manifest = manifest_path.read_bytes()

            code, _ = run_cli(argv)
            self.assertEqual(0, code)
            self.assertEqual(first, path.read_bytes())
            self.assertEqual(first_manifest, manifest_path.read_bytes())

        self.assertTrue(first.startswith(b'k,r,mi_bits\n'))
        self.assertEqual('fig2', manifest['command'])
        self.assertEqual('csv', manifest['format'])
        self.assertEqual(0, manifest['seed'])
        self.assertEqual([1, 3], manifest['parameters']['k'])


if __name__ == '__main__':
    unittest.main()
