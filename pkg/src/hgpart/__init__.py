# SPDX-FileCopyrightText: 2026-present hgpart contributors
#
# SPDX-License-Identifier: MIT
from hgpart.__about__ import __version__
from hgpart.config import Constraints, Mode, PartitionerConfig
from hgpart.driver import Partitioner, partition_constrained, partition_kway
from hgpart.formats import FileFormat, read_hypergraph, read_partition, write_hypergraph, write_partition
from hgpart.hypergraph import (
    Hypergraph,
    Partitioning,
    build_incidence,
    connectivity,
    cut_net,
    validate_partitioning,
)
