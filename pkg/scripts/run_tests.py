"""
Pre-run Check Suite
Checks the environment, configuration and numerical acceptance checks
before long experiments.

Usage: python scripts/run_tests.py [--quick]
"""

import sys
from pathlib import Path

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from datetime import datetime


class TestRunner:
    """Check runner with PASS / WARN / FAIL tallies."""

    def __init__(self, quick: bool = False):
        self.passed = 0
        self.failed = 0
        self.warnings = 0
        self.quick = quick

    def print_header(self, title):
        """Print test section header."""
        print("\n" + "=" * 70)
        print(f"  {title}")
        print("=" * 70)

    def test_pass(self, test_name):
        self.passed += 1
        print(f"PASS: {test_name}")

    def test_fail(self, test_name, error):
        self.failed += 1
        print(f"FAIL: {test_name}")
        print(f"   Error: {error}")

    def test_warn(self, test_name, warning):
        self.warnings += 1
        print(f"WARN: {test_name}")
        print(f"   Warning: {warning}")

    def test_environment(self):
        """Test 1: Environment."""
        self.print_header("TEST 1: ENVIRONMENT")

        py_version = sys.version_info
        if py_version.major == 3 and py_version.minor >= 10:
            self.test_pass(f"Python version {py_version.major}.{py_version.minor}")
        else:
            self.test_fail("Python version", f"Need Python 3.10+, got {py_version.major}.{py_version.minor}")

        import load_environment
        loaded = load_environment.load_environment()
        if loaded:
            self.test_pass(f"Environment files: {', '.join(p.name for p in loaded)}")
        else:
            self.test_warn("Environment files", "None found; using built-in defaults")

    def test_dependencies(self):
        """Test 2: Python Dependencies."""
        self.print_header("TEST 2: PYTHON DEPENDENCIES")

        critical_deps = [
            ('numpy', 'numpy'),
            ('scipy', 'scipy'),
            ('pandas', 'pandas'),
            ('sympy', 'sympy'),
            ('pydantic', 'pydantic'),
            ('pydantic_settings', 'pydantic-settings'),
            ('click', 'click'),
            ('orjson', 'orjson'),
            ('joblib', 'joblib'),
            ('colorlog', 'colorlog'),
        ]

        for module_name, package_name in critical_deps:
            try:
                __import__(module_name)
                self.test_pass(f"Dependency: {package_name}")
            except ImportError:
                self.test_fail(f"Dependency: {package_name}", f"Install with: pip install {package_name}")

        import scipy
        major, minor = (int(x) for x in scipy.__version__.split(".")[:2])
        if (major, minor) >= (1, 12):
            self.test_pass(f"scipy {scipy.__version__} (gmres rtol keyword)")
        else:
            self.test_fail("scipy version", f"Need scipy >= 1.12, got {scipy.__version__}")

    def test_configuration(self):
        """Test 3: Configuration."""
        self.print_header("TEST 3: CONFIGURATION")

        try:
            from config.settings import settings, validate_settings
            self.test_pass("Settings module import")

            if validate_settings(verbose=False):
                self.test_pass("Configuration validation")
            else:
                self.test_fail("Configuration validation", "Run python config/settings.py for details")

            if settings.N_THETA > 512:
                self.test_warn("Grid size", f"N_THETA={settings.N_THETA}; solves will be slow")

        except Exception as e:
            self.test_fail("Configuration import", str(e))

    def test_logging(self):
        """Test 4: Logging System."""
        self.print_header("TEST 4: LOGGING SYSTEM")

        try:
            from src.utils.logger import get_logger
            from config.settings import settings

            logger = get_logger("run_tests", settings.LOG_LEVEL, settings.LOG_FILE_PATH,
                                settings.LOG_MAX_BYTES, settings.LOG_BACKUP_COUNT)
            self.test_pass("Logger instantiated")

            logger.certificate("logging", 0.0, 1.0, True)
            self.test_pass("Log writing successful")

            if Path(settings.LOG_FILE_PATH).exists():
                self.test_pass(f"Log file: {settings.LOG_FILE_PATH}")
            else:
                self.test_warn("Log file", "Not created yet")

        except Exception as e:
            self.test_fail("Logging system", str(e))

    def test_acceptance(self):
        """Test 5: Numerical Acceptance Checks."""
        self.print_header("TEST 5: NUMERICAL ACCEPTANCE CHECKS")

        try:
            from config.settings import settings
            from src.cli.verify import CHECKS, VerifyContext, run_acceptance
            from src.grid.circle import CircleGrid
            from src.grid.radial import RadialRule
            from src.solver.config import SolveConfig

            n_theta = 32 if self.quick else 64
            context = VerifyContext(CircleGrid(n_theta), RadialRule(4, 6), SolveConfig.from_settings(),
                                    settings.SEED, settings.THREADS)
            names = ["classical", "constant", "operators", "uniqueness"] if self.quick else list(CHECKS)

            for name in names:
                try:
                    result = run_acceptance(context, [name])["checks"][name]
                except Exception as e:
                    self.test_fail(f"Check: {name}", str(e))
                    continue
                if result["passed"]:
                    self.test_pass(f"Check: {name}")
                else:
                    self.test_fail(f"Check: {name}", result.get("error") or result.get("measured"))

        except Exception as e:
            self.test_fail("Acceptance checks", str(e))

    def run_all_tests(self):
        """Run all tests and generate report."""
        print("\n" + "=" * 70)
        print("BELTRAMI LAB - CHECK SUITE")
        print("=" * 70)
        print(f"Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

        self.test_environment()
        self.test_dependencies()
        self.test_configuration()
        self.test_logging()
        self.test_acceptance()

        print("\n" + "=" * 70)
        print("TEST RESULTS SUMMARY")
        print("=" * 70)
        print(f"Passed:   {self.passed}")
        print(f"Warnings: {self.warnings}")
        print(f"Failed:   {self.failed}")
        print(f"Total:    {self.passed + self.warnings + self.failed}")

        if self.failed == 0:
            print("\nALL CHECKS PASSED")
            return True

        print(f"\n{self.failed} check(s) failed.")
        print("\nCommon fixes:")
        print("  - Install missing dependencies: pip install -r requirements.txt")
        print("  - Check config/beltrami.env against python config/settings.py")
        print("  - Inspect a failing check: python main.py verify --only <name>")
        return False


if __name__ == "__main__":
    runner = TestRunner(quick="--quick" in sys.argv)
    success = runner.run_all_tests()
    sys.exit(0 if success else 1)
