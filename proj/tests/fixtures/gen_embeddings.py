#!/usr/bin/env python3
# Copyright 2026 The numprobe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes tiny_embeddings.bin with the standard library only.

An independent writer for the reader tests: 3 records of dimension 4.
"""

import json
import struct

header = {"dim": 4, "count": 3, "dtype": "f32le",
          "source_model": "distilbert-base-multilingual-cased",
          "dataset": "en_task1_bare_test.tsv"}
records = [
    (30000, 0, [0.5, -1.25, 3.0, 0.0]),
    (30001, 1, [1e-3, 2.5, -0.75, 1024.0]),
    (2**40 + 7, 1, [-0.0, 0.1, 7.5, -3.5]),
]

with open("tiny_embeddings.bin", "wb") as f:
    f.write(json.dumps(header).encode("utf-8") + b"\n")
    for rid, label, vec in records:
        f.write(struct.pack("<QB", rid, label))
        f.write(struct.pack("<4f", *vec))
