#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"cached module"

dot_medfx = {}
args = {}  # args won't need resetting


def reset_cache():
    global dot_medfx

    dot_medfx = {}
