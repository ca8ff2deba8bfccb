#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"Project description variables"

PROJECT_NAME = "medfx"
VERSION = "0.3.0"
DESCRIPTION = "Direct and indirect effects, bounds and a counterfactual oracle for discrete mediation models"
AUTHOR = "The medfx Authors"
AUTHOR_EMAIL = "medfx-dev@googlegroups.com"
LICENCE = "Apache License 2.0"
URL = "https://github.com/medfx/medfx"
