"""
chaincalc Setup Verification Script
Checks that dependencies are importable and that a short construction verifies.
"""

import sys
import importlib
import platform

def check_python_version():
    """Check if Python version is 3.10+"""
    version = sys.version_info
    print(f"🐍 Python Version: {version.major}.{version.minor}.{version.micro}")

    if version.major == 3 and version.minor >= 10:
        print("✅ Python version is compatible")
        return True
    else:
        print("❌ Python 3.10+ required (dataclass slots)")
        return False

def check_package(package_name, import_name=None):
    """Check if a package is installed and importable"""
    if import_name is None:
        import_name = package_name

    try:
        importlib.import_module(import_name)
        print(f"✅ {package_name}")
        return True
    except ImportError:
        print(f"❌ {package_name} - Not installed")
        return False

def check_required_packages():
    """Check all required packages"""
    packages = [
        ("numpy", "numpy"),
        ("pandas", "pandas"),
        ("pydantic", "pydantic"),
        ("pyyaml", "yaml"),
        ("python-dotenv", "dotenv"),
        ("tqdm", "tqdm"),
        ("pytest", "pytest"),
    ]

    print("\n📦 Checking Required Packages:")
    print("-" * 40)

    missing_packages = []
    for package_name, import_name in packages:
        if not check_package(package_name, import_name):
            missing_packages.append(package_name)

    return not missing_packages, missing_packages

def check_system_info():
    """Display system information"""
    print("\n💻 System Information:")
    print("-" * 40)
    print(f"🖥️  Platform: {platform.system()} {platform.release()}")
    print(f"🐍 Python Executable: {sys.executable}")

def check_construction(stages=5):
    """Run a short bundled construction and verify it"""
    print("\n🧮 Construction Smoke Test:")
    print("-" * 40)
    try:
        from chaincalc.config import load_config
        from chaincalc.construction import verify_trace
        from chaincalc.fixtures import bundled_trace

        cfg = load_config()
        trace = bundled_trace(stages)
        report = verify_trace(trace, net_offset=int(cfg["construction"]["net_offset"]))
    except Exception as e:
        print(f"❌ Construction failed: {e}")
        return False
    if report['valid']:
        print(f"✅ {trace.T} stages, {len(trace.actions)} actions, all checks passed")
        return True
    for err in report['errors']:
        print(f"❌ {err}")
    return False

def main():
    """Main verification function"""
    print("🔍 chaincalc Setup Verification")
    print("=" * 50)

    python_ok = check_python_version()
    packages_ok, missing = check_required_packages()
    check_system_info()
    construction_ok = packages_ok and check_construction()

    print("\n📋 Verification Summary:")
    print("=" * 50)

    if python_ok and packages_ok and construction_ok:
        print("✅ All checks passed!")
        print("\n🚀 Try:")
        print("   python -m chaincalc construct --out trace.json")
        print("   python -m chaincalc verify --trace trace.json")
        return 0

    print("❌ Setup verification failed!")
    if not python_ok:
        print("   • Update Python to version 3.10 or higher")
    if missing:
        print("   • Install missing packages:")
        print(f"     pip install {' '.join(missing)}")
    return 1

if __name__ == "__main__":
    sys.exit(main())
