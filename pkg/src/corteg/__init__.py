"""corteg: dual-stream intracranial signal decoding at desk scale.

Subpackages
-----------
numcore   tensor autodiff engine, layers, optimizer
dsp       causal preprocessing chain (filters, envelope, windows)
adapter   coordinate -> channel-embedding spatial adapter
model     tokenizers, encoder, masked-autoencoder pretraining
train     training regimes, metrics, sweeps
analysis  manifold / importance / onset analyses and nonparametric stats
data      on-disk containers, synthetic generators, checkpoints
cli       command-line entry point
"""

__version__ = "0.1.0"
