"""Pre-norm transformer encoder-decoder for span generation.

Sequence-to-sequence is the natural shape for emitting a variable-length
span at a single masked position: the encoder reads prefix-sentinel-suffix
and the decoder generates the span autoregressively.  Attention dropout
and hidden (feed-forward/residual) dropout are separate knobs; output
logits are tied to the input embedding.
"""

from __future__ import annotations

import torch
from torch import nn


class _FeedForward(nn.Module):
    def __init__(self, hidden_size: int, intermediate_size: int, dropout: float):
        super().__init__()
        self.net = nn.Sequential(
            nn.Linear(hidden_size, intermediate_size),
            nn.GELU(),
            nn.Dropout(dropout),
            nn.Linear(intermediate_size, hidden_size),
        )

    def forward(self, x):
        return self.net(x)


class _EncoderLayer(nn.Module):
    def __init__(self, config):
        super().__init__()
        self.attn = nn.MultiheadAttention(
            config.hidden_size,
            config.attention_heads,
            dropout=config.attention_dropout,
            batch_first=True,
        )
        self.ff = _FeedForward(config.hidden_size, config.intermediate_size, config.hidden_dropout)
        self.norm1 = nn.LayerNorm(config.hidden_size)
        self.norm2 = nn.LayerNorm(config.hidden_size)
        self.drop = nn.Dropout(config.hidden_dropout)

    def forward(self, x, src_pad):
        h = self.norm1(x)
        a, _ = self.attn(h, h, h, key_padding_mask=src_pad, need_weights=False)
        x = x + self.drop(a)
        x = x + self.drop(self.ff(self.norm2(x)))
        return x


class _DecoderLayer(nn.Module):
    def __init__(self, config):
        super().__init__()
        self.self_attn = nn.MultiheadAttention(
            config.hidden_size,
            config.attention_heads,
            dropout=config.attention_dropout,
            batch_first=True,
        )
        self.cross_attn = nn.MultiheadAttention(
            config.hidden_size,
            config.attention_heads,
            dropout=config.attention_dropout,
            batch_first=True,
        )
        self.ff = _FeedForward(config.hidden_size, config.intermediate_size, config.hidden_dropout)
        self.norm1 = nn.LayerNorm(config.hidden_size)
        self.norm2 = nn.LayerNorm(config.hidden_size)
        self.norm3 = nn.LayerNorm(config.hidden_size)
        self.drop = nn.Dropout(config.hidden_dropout)

    def forward(self, x, memory, src_pad, causal):
        h = self.norm1(x)
        a, _ = self.self_attn(h, h, h, attn_mask=causal, need_weights=False)
        x = x + self.drop(a)
        h = self.norm2(x)
        a, _ = self.cross_attn(h, memory, memory, key_padding_mask=src_pad, need_weights=False)
        x = x + self.drop(a)
        x = x + self.drop(self.ff(self.norm3(x)))
        return x


class SpanModel(nn.Module):
    def __init__(self, vocab_size: int, config):
        super().__init__()
        self.config = config
        self.vocab_size = vocab_size
        d = config.hidden_size
        self.embed = nn.Embedding(vocab_size, d)
        self.enc_pos = nn.Embedding(config.max_positions, d)
        self.dec_pos = nn.Embedding(config.max_positions, d)
        self.in_drop = nn.Dropout(config.hidden_dropout)
        self.enc_layers = nn.ModuleList(
            _EncoderLayer(config) for _ in range(config.hidden_layers)
        )
        self.dec_layers = nn.ModuleList(
            _DecoderLayer(config) for _ in range(config.hidden_layers)
        )
        self.enc_norm = nn.LayerNorm(d)
        self.dec_norm = nn.LayerNorm(d)
        for emb in (self.embed, self.enc_pos, self.dec_pos):
            nn.init.normal_(emb.weight, std=0.02)

    def encode(self, src, src_pad):
        positions = torch.arange(src.size(1), device=src.device)
        x = self.in_drop(self.embed(src) + self.enc_pos(positions))
        for layer in self.enc_layers:
            x = layer(x, src_pad)
        return self.enc_norm(x)

    def decode(self, memory, src_pad, dec_in):
        t = dec_in.size(1)
        positions = torch.arange(t, device=dec_in.device)
        causal = torch.triu(
            torch.ones((t, t), dtype=torch.bool, device=dec_in.device), diagonal=1
        )
        x = self.in_drop(self.embed(dec_in) + self.dec_pos(positions))
        for layer in self.dec_layers:
            x = layer(x, memory, src_pad, causal)
        x = self.dec_norm(x)
        return x @ self.embed.weight.T  # tied output projection

    def forward(self, src, src_pad, dec_in):
        return self.decode(self.encode(src, src_pad), src_pad, dec_in)
