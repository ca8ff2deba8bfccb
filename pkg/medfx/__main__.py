#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

import sys

from medfx import cli

sys.exit(cli.main())
