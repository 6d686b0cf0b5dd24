#!/usr/bin/env python3
"""
Reward Peak Explainer Setup Script
This script helps set up the environment for the Reward Peak Explainer
"""

import os
import subprocess
import sys

SMOKE_SCENARIO = os.path.join("scenarios", "corridor_ab.txt")


def check_python_version():
    """Check if Python version is compatible"""
    if sys.version_info < (3, 9):
        print("❌ Python 3.9 or higher is required")
        sys.exit(1)
    print(f"✅ Python {sys.version.split()[0]} detected")


def install_requirements():
    """Install Python requirements"""
    print("\n📦 Installing Python packages...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
        print("✅ Python packages installed successfully")
    except subprocess.CalledProcessError:
        print("❌ Failed to install Python packages")
        sys.exit(1)


def setup_env_file():
    """Set up environment file"""
    if os.path.exists(".env"):
        print("✅ .env file already exists")
        return
    if not os.path.exists(".env.example"):
        print("❌ .env.example file not found")
        return
    print("\n🔧 Setting up environment file...")
    with open(".env.example", "r") as example:
        content = example.read()
    with open(".env", "w") as env_file:
        env_file.write(content)
    print("✅ Created .env file from template")


def smoke_check():
    """Run the oracle comparison on the bundled corridor scenario"""
    print("\n🔎 Checking peak values against value iteration...")
    result = subprocess.run([sys.executable, "-m", "src.cli", "check", SMOKE_SCENARIO])
    if result.returncode != 0:
        print("❌ Oracle check failed")
        sys.exit(result.returncode)
    print("✅ Oracle check passed")


def main():
    print("⛰️  Reward Peak Explainer Setup")
    print("=" * 40)

    check_python_version()
    install_requirements()
    setup_env_file()
    smoke_check()

    print("\n🎉 Setup completed!")
    print("\nNext steps:")
    print("1. Try: python -m src.cli solve scenarios/corridor_ab.txt")
    print("2. Run the tests: pytest")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a build backend (pip install): package metadata lives in pyproject.toml
        from setuptools import setup

        setup()
    else:
        main()
