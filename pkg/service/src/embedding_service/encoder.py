"""The encoder behind the service: a bidirectional transformer plus its
tokenizer, wrapped so the HTTP layer only sees texts in, rows out.

``TINY_SEEDED`` names a self-contained model: a small bidirectional encoder
with seeded random weights over a character-piece vocabulary. It needs no
downloads, is deterministic across processes, and exercises exactly the
same code path as a pretrained checkpoint, which can be selected by passing
any local model path or hub id instead.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np
import torch

TINY_SEEDED = "tiny-seeded"
_TINY_SEED = 1234


class OverLengthError(ValueError):
    """A text tokenized beyond the encoder's position limit."""


class NoTokensError(ValueError):
    """A text produced no content tokens (e.g. whitespace only)."""


@dataclass(frozen=True)
class EncodedText:
    tokens: tuple[str, ...]
    matrix: np.ndarray  # tokens x dim (or 1 x dim when pooled), unit rows


def _tiny_vocab() -> dict[str, int]:
    """Character pieces, so WordPiece can segment any ASCII word."""
    pieces = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    chars = list(string.ascii_lowercase) + list(string.digits) + list("'-.,!?;:()")
    pieces.extend(chars)
    pieces.extend(f"##{c}" for c in chars)
    return {piece: i for i, piece in enumerate(pieces)}


class Encoder:
    """Loads the model once; encoding is stateless and deterministic."""

    def __init__(self, model_id: str = TINY_SEEDED):
        from transformers import AutoModel, AutoTokenizer, BertConfig, BertModel, BertTokenizer

        self.model_id = model_id
        if model_id == TINY_SEEDED:
            self.tokenizer = BertTokenizer(vocab=_tiny_vocab(), do_lower_case=True)
            config = BertConfig(
                vocab_size=len(self.tokenizer),
                hidden_size=32,
                num_hidden_layers=2,
                num_attention_heads=2,
                intermediate_size=64,
                max_position_embeddings=128,
            )
            torch.manual_seed(_TINY_SEED)
            self.model = BertModel(config)
        else:
            self.tokenizer = AutoTokenizer.from_pretrained(model_id)
            self.model = AutoModel.from_pretrained(model_id)
        self.model.eval()
        self.dim = int(self.model.config.hidden_size)
        self.max_positions = int(self.model.config.max_position_embeddings)
        self.num_layers = int(self.model.config.num_hidden_layers)
        # rows for these ids never reach the response
        self._drop_ids = {
            tid
            for tid in (
                self.tokenizer.cls_token_id,
                self.tokenizer.sep_token_id,
                self.tokenizer.pad_token_id,
            )
            if tid is not None
        }

    def check_layer(self, layer: int) -> None:
        # hidden_states holds the embedding layer plus one entry per block
        if not -(self.num_layers + 1) <= layer <= self.num_layers:
            raise ValueError(
                f"layer must be in [-{self.num_layers + 1}, {self.num_layers}], got {layer}"
            )

    @torch.no_grad()
    def encode(self, texts: list[str], pooling: str = "tokens", layer: int = -1) -> list[EncodedText]:
        self.check_layer(layer)
        results = []
        for text in texts:
            encoding = self.tokenizer(text, return_tensors="pt")
            ids = encoding["input_ids"][0]
            if len(ids) > self.max_positions:
                raise OverLengthError(
                    f"text tokenizes to {len(ids)} positions, limit {self.max_positions}"
                )
            keep = [i for i, tid in enumerate(ids.tolist()) if tid not in self._drop_ids]
            if not keep:
                raise NoTokensError("text produced no content tokens")
            output = self.model(**encoding, output_hidden_states=True)
            hidden = output.hidden_states[layer][0].numpy()
            matrix = hidden[keep]
            tokens = tuple(
                self.tokenizer.convert_ids_to_tokens([int(ids[i]) for i in keep])
            )
            if pooling == "sentence":
                matrix = matrix.mean(axis=0, keepdims=True)
                tokens = (text,)
            matrix = matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
            results.append(EncodedText(tokens=tokens, matrix=matrix))
        return results
