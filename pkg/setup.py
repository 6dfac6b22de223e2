from setuptools import setup, find_packages


def setup_package():
    setup(
        name="beamplan",
        packages=find_packages(),
        include_package_data=True,
        package_data={"beamplan": ["configs/*.cfg"]},
    )


if __name__ == "__main__":
    setup_package()
