# SPDX-FileCopyrightText: 2026-present hgpart contributors
#
# SPDX-License-Identifier: MIT
__version__ = "0.0.1"
