"""Desk-scale encoder-decoder trainer for masked span completion.

Consumes the dataset-toolkit artifacts purely through files: masked
datasets and byte-level BPE models come in, prediction records and
training logs go out.  Nothing here imports the toolkit package.
"""
