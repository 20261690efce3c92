from setuptools import setup, find_packages

setup(
    name="cryptopt",
    version="1.0.0",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    include_package_data=True,
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "python-dotenv",
    ],
    entry_points={"console_scripts": ["cryptopt=cryptopt.app:main"]},
)
