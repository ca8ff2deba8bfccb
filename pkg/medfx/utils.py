#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"random utils"

import json
import logging
import os
from hashlib import sha256

import jinja2
import yaml
from medfx import cached, defaults

logger = logging.getLogger(__name__)


def file_hash(path):
    """Returns sha256 hex digest for the contents of the file at path"""
    with open(path, "rb") as fp:
        return sha256(fp.read()).hexdigest()


def dictionary_hash(dict):
    """Return the sha256 hash for dict"""
    return sha256(json.dumps(dict, sort_keys=True).encode("UTF-8")).hexdigest()


def format_real(value, digits=defaults.SIGNIFICANT_DIGITS):
    """Formats value with digits significant digits, leaves non-reals untouched"""
    if isinstance(value, float):
        return "{:.{}g}".format(value, digits)
    return str(value)


def dot_medfx_config():
    """Returns the parsed YAML .medfx file. Subsequent requests will be cached"""
    if not cached.dot_medfx:
        if os.path.exists(defaults.DOT_MEDFX_PATH):
            with open(defaults.DOT_MEDFX_PATH, "r") as f:
                cached.dot_medfx = yaml.safe_load(f) or {}

    return cached.dot_medfx


def from_dot_medfx(command, flag, default):
    """
    Returns the 'flag' for 'command' from .medfx file. If failed, returns 'default'
    """
    medfx_config = dot_medfx_config()

    try:
        if medfx_config[command]:
            flag_value = medfx_config[command][flag]
            if flag_value is not None:
                return flag_value
    except (KeyError, TypeError):
        pass

    return default


def base_seed(default=0):
    """Returns the suite base seed, overridden by the MEDFX_SEED environment variable"""
    raw = os.environ.get(defaults.SEED_ENV_VAR)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%s, not an integer", defaults.SEED_ENV_VAR, raw)
        return default


def render_jinja2_file(name, context, search_paths=None):
    """Render the jinja2 template name from the packaged templates with context"""
    search_paths = (search_paths or []) + [defaults.TEMPLATES_PATH]
    env = jinja2.Environment(
        undefined=jinja2.StrictUndefined,
        loader=jinja2.FileSystemLoader(search_paths),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["real"] = format_real
    return env.get_template(name).render(context)
