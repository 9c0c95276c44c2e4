"""sacsim: simulation and estimation toolkit for a soft acoustic curvature sensor.

Submodules
----------
geomcore    rotation-group helpers and Cosserat rod statics
channelsim  dual-beam channel boundary-value problem and sweeps
acoustics   tone synthesis, FFT feature extraction, attenuation model
wavio       mono WAV read/write
regress     GPR / SVR / KNN model zoo, cross-validation, persistence
pipeline    dataset generation, ingestion, evaluation, noise robustness
config      run configuration file handling
cli         command-line interface
"""

__version__ = "0.1.0"
