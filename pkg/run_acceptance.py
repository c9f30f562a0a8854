#!/usr/bin/env python3
"""
验收运行器
Acceptance Runner

先运行快速单元测试，再运行慢速的穷举验收任务：
- 各定理的穷举验证
- 随机对照暴力枚举
- 多进程报告一致性

Runs the fast unit suite, then the slow exhaustive acceptance campaigns:
- exhaustive theorem campaigns
- random pairs checked against brute force
- identical reports across worker counts
"""

import os
import subprocess
import sys
from pathlib import Path


def _pytest(label: str, *args: str) -> bool:
    print(f"\n📋 {label}...")
    result = subprocess.run(
        [sys.executable, "-m", "pytest", *args, "--tb=short", "--color=yes"],
        capture_output=False,
    )
    return result.returncode == 0


def run_tests() -> bool:
    """运行测试 / Run the suites"""
    os.chdir(Path(__file__).parent)
    try:
        if not _pytest("运行单元测试 / Running unit tests", "-m", "not slow", "-q"):
            print("\n❌ 单元测试失败 / Unit tests failed")
            return False
        if not _pytest("运行验收任务 / Running acceptance campaigns", "-m", "slow", "-v"):
            print("\n❌ 验收任务失败 / Acceptance campaigns failed")
            return False
        return True
    except Exception as e:
        print(f"❌ 测试运行出错 / Error running tests: {e}")
        return False


def main():
    """主函数 / Main function"""
    print("🚀 满秩直线验收套件 / Full-Rank Lines Acceptance Suite")
    print("=" * 60)

    if run_tests():
        print("\n🎉 全部通过！/ Everything passed!")
        sys.exit(0)
    print("\n💥 测试失败，请检查错误信息 / Tests failed, please check error messages")
    sys.exit(1)


if __name__ == "__main__":
    main()
