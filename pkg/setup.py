#!/usr/bin/env python3
"""
Setup script for the critical intermittency laboratory

Installs the requirements (and the dev extra with --dev), writes .env from
.env.example, and checks that the schema, defaults and recipes resolve.
"""

import asyncio
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).parent
RUNTIME_DIRECTORIES = ("logs", "output")
DEV_PACKAGES = (
    "pytest>=7.0.0",
    "pytest-asyncio>=0.21.0",
    "hypothesis>=6.90.0",
    "black>=23.0.0",
    "isort>=5.12.0",
    "flake8>=6.0.0",
    "mypy>=1.0.0",
)


def pip_install(arguments, description):
    """Run pip with the current interpreter; True on success"""
    print(f"🔄 {description}...")
    result = subprocess.run(
        [sys.executable, "-m", "pip", "install", *arguments], cwd=ROOT, capture_output=True, text=True
    )
    if result.returncode != 0:
        print(f"❌ {description} failed:\n{result.stderr.strip()[-2000:]}")
        return False
    print(f"✅ {description} completed")
    return True


def prepare_directories():
    for name in RUNTIME_DIRECTORIES:
        (ROOT / name).mkdir(exist_ok=True)
        print(f"📁 {name}/ ready")


def write_env_file():
    env_file = ROOT / ".env"
    if env_file.exists():
        print("✅ .env already present, left untouched")
        return
    shutil.copyfile(ROOT / ".env.example", env_file)
    print("📝 .env written from .env.example (LAB_OUTPUT_DIR, LOG_LEVEL)")


async def check_recipes():
    """Load the schema and defaults, then resolve every checked-in recipe"""
    sys.path.insert(0, str(ROOT))
    from src.exceptions import ConfigError
    from src.systems.catalog import make_critical
    from src.systems.hypotheses import lyapunov_at_origin
    from src.validators.config_validator import ConfigValidator

    chi = lyapunov_at_origin(make_critical(0.5j, 0.6))
    print(f"✅ Lyapunov exponent at 0 for lambda = 0.5i, p0 = 0.6: {chi:.6f}")

    validator = ConfigValidator()
    failures = 0
    for recipe in sorted((ROOT / "data" / "experiments").glob("*.json")):
        try:
            config = await validator.validate_config(str(recipe))
            print(f"   {recipe.name}: {config.system.family}, {config.run.trials} trial(s)")
        except ConfigError as e:
            failures += 1
            print(f"❌ {recipe.name}: {e}")
    return failures == 0


def main():
    print("🎯 Critical Intermittency Lab Setup")
    print("=" * 50)

    if sys.version_info < (3, 9):
        print(f"❌ Python 3.9+ is required, found {sys.version.split()[0]}")
        sys.exit(1)

    prepare_directories()

    if not pip_install(["-r", "requirements.txt"], "Installing runtime requirements"):
        sys.exit(1)
    if "--dev" in sys.argv and not pip_install(list(DEV_PACKAGES), "Installing test and lint tooling"):
        sys.exit(1)

    write_env_file()

    try:
        recipes_ok = asyncio.run(check_recipes())
    except Exception as e:
        print(f"❌ Import check failed: {e}")
        sys.exit(1)

    if not recipes_ok:
        print("⚠️  Some recipes do not validate against config/run_config.schema.json")

    print("\n🎉 Setup finished")
    print("\n📋 Next steps:")
    print("1. python main.py classify-lambda --re 0 --im 0.5")
    print("2. python test_system.py")
    print("3. pytest -m 'not slow'   (after python setup.py --dev)")


if __name__ == "__main__":
    # setuptools builds invoke this file with a command such as egg_info or bdist_wheel
    if len(sys.argv) > 1 and not sys.argv[1].startswith("-"):
        from setuptools import setup

        setup()
    else:
        main()
