// SPDX-License-Identifier: Apache-2.0
//
// csikit - massive MIMO CSI toolkit
// Copyright (C) 2026 The csikit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIKIT_DATASET_HPP
#define CSIKIT_DATASET_HPP

#include "csikit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csikit
{
    // On-disk CSI sample, little-endian:
    //   "CSI1" | u8 version = 1 | u8 pad | u16 M | u16 F | u16 pad
    //   M*F entries, antenna-major, each float32 I then float32 Q
    inline constexpr std::size_t sample_header_bytes = 12;
    inline constexpr std::uint8_t sample_format_version = 1;

    enum class DatasetErrorKind
    {
        io,
        bad_magic,
        truncated,
        version_mismatch,
        size_mismatch,
        dimension_overflow,
        malformed_row,
        duplicate_id,
        missing_file,
    };

    std::string to_string(DatasetErrorKind kind);

    class DatasetError : public std::runtime_error
    {
    public:
        DatasetError(DatasetErrorKind kind, const std::string &what)
            : std::runtime_error(to_string(kind) + ": " + what), kind_(kind)
        {
        }
        DatasetErrorKind kind() const noexcept { return kind_; }

    private:
        DatasetErrorKind kind_;
    };

    struct SampleHeader
    {
        std::uint8_t version = sample_format_version;
        std::uint16_t antennas = 0;
        std::uint16_t subcarriers = 0;

        std::uint64_t file_size() const { return sample_header_bytes + 8ull * antennas * subcarriers; }
    };

    // Entries are stored as float32, so values are rounded to nearest on encode.
    std::vector<std::uint8_t> encode_sample(const CsiSample &csi);
    CsiSample decode_sample(std::span<const std::uint8_t> bytes);
    SampleHeader decode_sample_header(std::span<const std::uint8_t> bytes);

    // Writes to a sibling temporary and renames, so readers never see a partial file.
    // Returns the byte count written.
    std::size_t write_sample(const std::filesystem::path &path, const CsiSample &csi);
    CsiSample read_sample(const std::filesystem::path &path);
    SampleHeader read_sample_header(const std::filesystem::path &path);

    void write_file_atomic(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);
    void write_file_atomic(const std::filesystem::path &path, std::string_view content);
    std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path);

    struct SampleRecord
    {
        std::string sample_id;
        std::filesystem::path file;
        Position3 label;
        int user_id = 0;

        friend bool operator==(const SampleRecord &, const SampleRecord &) = default;
    };

    // CSV with a `#` comment preamble carrying the topology and radio snapshot, then
    // `sample_id,user_id,x_mm,y_mm,z_mm`. Sample files live next to the index as <id>.bin.
    struct DatasetIndex
    {
        std::vector<SampleRecord> records;
        std::string topology;
        RadioConfig radio;
        std::filesystem::path base_dir;

        // Appends a record whose file is base_dir/<id>.bin; throws on a duplicate id
        void add(const std::string &sample_id, int user_id, const Position3 &label);
        bool contains(const std::string &sample_id) const;
        std::size_t size() const { return records.size(); }
    };

    std::string format_index(const DatasetIndex &index);
    DatasetIndex parse_index(std::string_view content, const std::filesystem::path &base_dir);

    // Loads and validates an index; with check_files, every referenced sample must exist.
    DatasetIndex load_index(const std::filesystem::path &path, bool check_files = true);
    void save_index(const std::filesystem::path &path, const DatasetIndex &index);

    // Single-pass iteration over (record, sample) holding one decoded sample at a time.
    class SampleStream
    {
    public:
        struct Item
        {
            const SampleRecord *record = nullptr;
            CsiSample sample;
        };

        class iterator
        {
        public:
            using value_type = Item;
            using difference_type = std::ptrdiff_t;

            iterator() = default;
            const Item &operator*() const { return item_; }
            const Item *operator->() const { return &item_; }
            iterator &operator++();
            void operator++(int) { ++*this; }
            bool operator==(std::default_sentinel_t) const { return index_ == nullptr || pos_ >= index_->size(); }

        private:
            friend class SampleStream;
            iterator(const DatasetIndex *index, std::size_t pos);
            void load();

            const DatasetIndex *index_ = nullptr;
            std::size_t pos_ = 0;
            Item item_;
        };

        explicit SampleStream(const DatasetIndex &index) : index_(&index) {}

        iterator begin() const { return iterator(index_, 0); }
        std::default_sentinel_t end() const { return {}; }

    private:
        const DatasetIndex *index_;
    };

    // Decoded sample with the index's label, user and id attached
    CsiSample load_record(const SampleRecord &record);
}

#endif
