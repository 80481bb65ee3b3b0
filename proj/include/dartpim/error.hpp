/*
 * Copyright 2026 The dartpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DARTPIM_ERROR_HPP
#define DARTPIM_ERROR_HPP

#include <stdexcept>

namespace dartpim {

/// Input data that cannot be used: corrupt files, digest mismatches.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed FASTA/FASTQ/TSV text. The message names the line or record.
class ParseError : public DataError {
public:
    using DataError::DataError;
};

/// Invalid parameters or configuration values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace dartpim

#endif  // DARTPIM_ERROR_HPP
