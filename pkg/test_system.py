#!/usr/bin/env python3
"""
Smoke test for the critical intermittency laboratory
"""

import asyncio
import sys
import tempfile
from pathlib import Path
from loguru import logger

sys.path.insert(0, str(Path(__file__).parent))

from src.integration.lab_runner import LabRunner
from src.processors.artifact_writer import ArtifactWriter
from src.validators.config_validator import ConfigValidator

SMALL_RUN = {"run": {"n_steps": 20000, "trials": 2, "samples": 20, "cap": 100000}}


async def run_small(command: str, output: Path, overrides=None, parameter=None):
    validator = ConfigValidator()
    merged = {**SMALL_RUN, **(overrides or {})}
    merged["output"] = {"directory": str(output / command)}
    config = await validator.validate_config(None, merged, parameter)
    result = await LabRunner(config, validator, force=True).run(command)
    ArtifactWriter(config.output.directory, config.output.formats).emit(
        result, config.resolved(), config.config_hash()
    )
    return result


async def test_recipes():
    """Every checked-in recipe resolves"""
    print("🧪 Testing Experiment Recipes...")

    try:
        validator = ConfigValidator()
        recipes = sorted(Path("data/experiments").glob("*.json"))
        for recipe in recipes:
            await validator.validate_config(str(recipe))
        print(f"✅ {len(recipes)} recipes validated")
        return True
    except Exception as e:
        print(f"❌ Recipe validation failed: {str(e)}")
        return False


async def test_classification(output: Path):
    print("🧪 Testing Lambda Classification...")

    try:
        result = await run_small("classify-lambda", output, parameter=(0.0, 0.5))
        payload = result.summary
        print(f"✅ lambda = 0.5i classified as {payload['class']} (m={payload.get('m')}, n={payload.get('n')})")
        return payload["class"] == "Discrete"
    except Exception as e:
        print(f"❌ Classification failed: {str(e)}")
        return False


async def test_linearization(output: Path):
    print("🧪 Testing Koenigs Linearization...")

    try:
        result = await run_small("linearize", output)
        a2 = result.summary["phi"][1][0]
        print(f"✅ a2 = {a2}")
        return abs(a2 + 0.5) < 1e-12
    except Exception as e:
        print(f"❌ Linearization failed: {str(e)}")
        return False


async def test_occupation(output: Path):
    print("🧪 Testing Occupation Fractions...")

    try:
        result = await run_small("occupation", output)
        print(f"✅ Median occupation {result.summary['median']:.3f} over {result.summary['trials']} trials")
        return True
    except Exception as e:
        print(f"❌ Occupation failed: {str(e)}")
        return False


async def test_sojourn(output: Path):
    print("🧪 Testing Sojourn Decomposition...")

    try:
        result = await run_small("sojourn", output)
        print(f"✅ Identity exact: {result.summary['identity_exact']}")
        return result.summary["identity_exact"]
    except Exception as e:
        print(f"❌ Sojourn failed: {str(e)}")
        return False


async def test_curve(output: Path):
    print("🧪 Testing Unit-Circle Curve...")

    try:
        result = await run_small("curve", output, parameter=(0.5, 0.0))
        print(f"✅ {result.summary['crossings']} crossings")
        return result.summary["crossings"] <= 3
    except Exception as e:
        print(f"❌ Curve failed: {str(e)}")
        return False


async def run_comprehensive_test(output: Path):
    """Run comprehensive system test"""
    print("🎯 Running Comprehensive System Test")
    print("=" * 50)

    test_results = []

    tests = [
        ("Experiment Recipes", test_recipes),
        ("Lambda Classification", lambda: test_classification(output)),
        ("Koenigs Linearization", lambda: test_linearization(output)),
        ("Occupation Fractions", lambda: test_occupation(output)),
        ("Sojourn Decomposition", lambda: test_sojourn(output)),
        ("Unit-Circle Curve", lambda: test_curve(output)),
    ]

    for test_name, test_func in tests:
        print(f"\n📋 {test_name}")
        print("-" * 30)
        try:
            success = await test_func()
            test_results.append((test_name, success))
        except Exception as e:
            print(f"❌ {test_name} failed with exception: {str(e)}")
            test_results.append((test_name, False))

    print(f"\n📊 Test Summary")
    print("=" * 50)

    passed = sum(1 for _, success in test_results if success)
    total = len(test_results)

    for test_name, success in test_results:
        status = "✅ PASS" if success else "❌ FAIL"
        print(f"{status} {test_name}")

    print(f"\n🎯 Overall Result: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All tests passed! The lab is ready for use.")
        return True
    print("⚠️  Some tests failed. Please review the errors above.")
    return False


async def main():
    """Main test function"""
    logger.remove()
    logger.add(sys.stderr, level="WARNING")

    print("🧪 Critical Intermittency Lab Test Suite")
    print("=" * 60)

    required_files = [
        "config/run_config.schema.json",
        "config/defaults.yaml",
        "config/hypothesis_rules.yaml",
    ]
    missing_files = [path for path in required_files if not Path(path).exists()]
    if missing_files:
        print("❌ Missing required files:")
        for file_path in missing_files:
            print(f"   - {file_path}")
        return False

    print("✅ All required files present")

    with tempfile.TemporaryDirectory() as directory:
        success = await run_comprehensive_test(Path(directory))

    if success:
        print("\n🚀 Ready! Try:")
        print("   python main.py classify-lambda --re 0 --im 0.5")
        print("   python main.py occupation --config data/experiments/occupation.json")
    else:
        print("\n🔧 Please fix the issues above before using the lab.")

    return success


if __name__ == "__main__":
    success = asyncio.run(main())
    sys.exit(0 if success else 1)
