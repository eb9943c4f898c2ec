import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        build_dir = Path(self.build_temp).resolve() / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        configure = [
            "cmake",
            ext.sourcedir,
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DQSS_BUILD_TESTING=OFF",
            "-DQSS_BUILD_CLI=OFF",
        ]
        subprocess.run(configure, cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core",
             f"-j{os.cpu_count() or 2}"],
            cwd=build_dir,
            check=True,
        )

        # the module is staged under the build tree; place it where
        # setuptools expects the extension artifact
        staged = sorted((build_dir / "python" / "qss_sim").glob("_core.*"))
        if not staged:
            raise RuntimeError("cmake did not produce the _core module")
        ext_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(staged[-1], ext_path)


setup(
    ext_modules=[CMakeExtension("qss_sim._core")],
    cmdclass={"build_ext": CMakeBuild},
)
