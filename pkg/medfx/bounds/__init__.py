# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0
