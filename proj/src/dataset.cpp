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

#include "csikit/dataset.hpp"
#include "csikit/text.hpp"

#include <unistd.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <algorithm>
#include <map>
#include <set>

namespace csikit
{
    namespace fs = std::filesystem;

    std::string to_string(DatasetErrorKind kind)
    {
        switch (kind)
        {
        case DatasetErrorKind::io:
            return "I/O error";
        case DatasetErrorKind::bad_magic:
            return "bad magic";
        case DatasetErrorKind::truncated:
            return "truncated";
        case DatasetErrorKind::version_mismatch:
            return "version mismatch";
        case DatasetErrorKind::size_mismatch:
            return "size mismatch";
        case DatasetErrorKind::dimension_overflow:
            return "dimension overflow";
        case DatasetErrorKind::malformed_row:
            return "malformed row";
        case DatasetErrorKind::duplicate_id:
            return "duplicate id";
        case DatasetErrorKind::missing_file:
            return "missing file";
        }
        return "dataset error";
    }

    namespace
    {
        constexpr std::uint8_t sample_magic[4] = {'C', 'S', 'I', '1'};

        void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v)
        {
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
            out.push_back(static_cast<std::uint8_t>(v >> 8));
        }

        void put_f32(std::vector<std::uint8_t> &out, double v)
        {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
            for (int s = 0; s < 32; s += 8)
                out.push_back(static_cast<std::uint8_t>(bits >> s));
        }

        std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at)
        {
            return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
        }

        float get_f32(std::span<const std::uint8_t> b, std::size_t at)
        {
            std::uint32_t bits = 0;
            for (int i = 3; i >= 0; --i)
                bits = (bits << 8) | b[at + static_cast<std::size_t>(i)];
            return std::bit_cast<float>(bits);
        }

        std::atomic<std::uint64_t> temp_counter{0};
    }

    std::vector<std::uint8_t> encode_sample(const CsiSample &csi)
    {
        const auto M = csi.h.rows();
        const auto F = csi.h.cols();
        if (M < 1 || F < 1)
            throw std::invalid_argument("CSI sample must have at least one antenna and one subcarrier");
        if (M > std::numeric_limits<std::uint16_t>::max() || F > std::numeric_limits<std::uint16_t>::max())
            throw DatasetError(DatasetErrorKind::dimension_overflow,
                               "dimensions " + std::to_string(M) + "x" + std::to_string(F) + " exceed 16 bits");
        for (Eigen::Index i = 0; i < csi.h.size(); ++i)
        {
            const auto v = csi.h.data()[i];
            if (!std::isfinite(static_cast<float>(v.real())) || !std::isfinite(static_cast<float>(v.imag())))
                throw std::invalid_argument("CSI sample entry is not representable as finite float32");
        }

        std::vector<std::uint8_t> out(std::begin(sample_magic), std::end(sample_magic));
        out.reserve(sample_header_bytes + 8 * static_cast<std::size_t>(M * F));
        out.push_back(sample_format_version);
        out.push_back(0);
        put_u16(out, static_cast<std::uint16_t>(M));
        put_u16(out, static_cast<std::uint16_t>(F));
        put_u16(out, 0);
        for (Eigen::Index m = 0; m < M; ++m)
            for (Eigen::Index k = 0; k < F; ++k)
            {
                put_f32(out, csi.h(m, k).real());
                put_f32(out, csi.h(m, k).imag());
            }
        return out;
    }

    SampleHeader decode_sample_header(std::span<const std::uint8_t> bytes)
    {
        if (bytes.size() < sample_header_bytes)
            throw DatasetError(DatasetErrorKind::truncated, "file shorter than the 12-byte header");
        if (!std::equal(std::begin(sample_magic), std::end(sample_magic), bytes.begin()))
            throw DatasetError(DatasetErrorKind::bad_magic, "expected 'CSI1'");
        SampleHeader h;
        h.version = bytes[4];
        if (h.version != sample_format_version)
            throw DatasetError(DatasetErrorKind::version_mismatch,
                               "file version " + std::to_string(h.version) + ", expected " +
                                   std::to_string(sample_format_version));
        h.antennas = get_u16(bytes, 6);
        h.subcarriers = get_u16(bytes, 8);
        if (h.antennas == 0 || h.subcarriers == 0)
            throw DatasetError(DatasetErrorKind::size_mismatch, "zero dimension in header");
        return h;
    }

    CsiSample decode_sample(std::span<const std::uint8_t> bytes)
    {
        const auto hdr = decode_sample_header(bytes);
        if (bytes.size() < hdr.file_size())
            throw DatasetError(DatasetErrorKind::truncated, "header declares " + std::to_string(hdr.file_size()) +
                                                                " bytes, file has " + std::to_string(bytes.size()));
        if (bytes.size() > hdr.file_size())
            throw DatasetError(DatasetErrorKind::size_mismatch, "header declares " + std::to_string(hdr.file_size()) +
                                                                    " bytes, file has " + std::to_string(bytes.size()));
        CsiMatrix h(hdr.antennas, hdr.subcarriers);
        std::size_t at = sample_header_bytes;
        for (Eigen::Index m = 0; m < h.rows(); ++m)
            for (Eigen::Index k = 0; k < h.cols(); ++k, at += 8)
                h(m, k) = Complex{get_f32(bytes, at), get_f32(bytes, at + 4)};
        return CsiSample(std::move(h), 0);
    }

    void write_file_atomic(const fs::path &path, std::span<const std::uint8_t> bytes)
    {
        fs::path tmp = path;
        tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(temp_counter.fetch_add(1));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw DatasetError(DatasetErrorKind::io, "cannot create '" + tmp.string() + "'");
            out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            out.close();
            if (!out)
            {
                std::error_code ec;
                fs::remove(tmp, ec);
                throw DatasetError(DatasetErrorKind::io, "write failed for '" + tmp.string() + "'");
            }
        }
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec)
        {
            fs::remove(tmp, ec);
            throw DatasetError(DatasetErrorKind::io, "cannot rename onto '" + path.string() + "'");
        }
    }

    void write_file_atomic(const fs::path &path, std::string_view content)
    {
        write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t *>(content.data()), content.size()));
    }

    std::vector<std::uint8_t> read_binary_file(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw DatasetError(DatasetErrorKind::missing_file, "cannot open '" + path.string() + "'");
        return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
    }

    std::size_t write_sample(const fs::path &path, const CsiSample &csi)
    {
        const auto bytes = encode_sample(csi);
        write_file_atomic(path, bytes);
        return bytes.size();
    }

    CsiSample read_sample(const fs::path &path)
    {
        auto sample = decode_sample(read_binary_file(path));
        const auto stem = path.stem().string();
        if (is_valid_sample_id(stem))
            sample.sample_id = stem;
        return sample;
    }

    SampleHeader read_sample_header(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw DatasetError(DatasetErrorKind::missing_file, "cannot open '" + path.string() + "'");
        std::uint8_t buf[sample_header_bytes];
        in.read(reinterpret_cast<char *>(buf), sizeof(buf));
        return decode_sample_header(std::span(buf, static_cast<std::size_t>(in.gcount())));
    }

    // ---- index --------------------------------------------------------------------------

    void DatasetIndex::add(const std::string &sample_id, int user_id, const Position3 &label)
    {
        if (!is_valid_sample_id(sample_id))
            throw DatasetError(DatasetErrorKind::malformed_row, "invalid sample id '" + sample_id + "'");
        if (contains(sample_id))
            throw DatasetError(DatasetErrorKind::duplicate_id, "sample id '" + sample_id + "'");
        records.push_back({sample_id, base_dir / (sample_id + ".bin"), label, user_id});
    }

    bool DatasetIndex::contains(const std::string &sample_id) const
    {
        return std::any_of(records.begin(), records.end(),
                           [&](const SampleRecord &r) { return r.sample_id == sample_id; });
    }

    std::string format_index(const DatasetIndex &index)
    {
        using text::format_number;
        const auto &r = index.radio;
        std::string out = "# csikit dataset index v1\n";
        out += "# topology = " + index.topology + "\n";
        out += "# carrier_hz = " + format_number(r.carrier_hz) + "\n";
        out += "# subcarrier_spacing_hz = " + format_number(r.subcarrier_spacing_hz) + "\n";
        out += "# total_subcarriers = " + std::to_string(r.total_subcarriers) + "\n";
        out += "# pilot_count = " + std::to_string(r.pilot_count) + "\n";
        out += "# interleave_factor = " + std::to_string(r.interleave_factor) + "\n";
        out += "# tx_power_dbm = " + format_number(r.tx_power_dbm) + "\n";
        out += "# rx_gain_db = " + format_number(r.rx_gain_db) + "\n";
        out += "# symbol_duration_s = " + format_number(r.symbol_duration_s) + "\n";
        out += "sample_id,user_id,x_mm,y_mm,z_mm\n";
        for (const auto &rec : index.records)
            out += rec.sample_id + "," + std::to_string(rec.user_id) + "," + format_number(rec.label.x) + "," +
                   format_number(rec.label.y) + "," + format_number(rec.label.z) + "\n";
        return out;
    }

    DatasetIndex parse_index(std::string_view content, const fs::path &base_dir)
    {
        DatasetIndex index;
        index.base_dir = base_dir;
        std::set<std::string, std::less<>> seen;
        std::map<std::string, std::string> meta;
        int line_no = 0;
        for (auto line : text::split(content, '\n'))
        {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            if (text::trim(line).empty())
                continue;
            if (line.front() == '#')
            {
                const auto body = line.substr(1);
                if (const auto eq = body.find('='); eq != std::string_view::npos)
                    meta[std::string(text::trim(body.substr(0, eq)))] = std::string(text::trim(body.substr(eq + 1)));
                continue;
            }
            if (line.starts_with("sample_id,"))
                continue;
            const auto cols = text::split(line, ',');
            const auto where = "index line " + std::to_string(line_no);
            if (cols.size() != 5)
                throw DatasetError(DatasetErrorKind::malformed_row, where + ": expected 5 columns");
            SampleRecord rec;
            rec.sample_id = std::string(text::trim(cols[0]));
            if (!is_valid_sample_id(rec.sample_id))
                throw DatasetError(DatasetErrorKind::malformed_row, where + ": invalid sample id '" + rec.sample_id + "'");
            if (!seen.insert(rec.sample_id).second)
                throw DatasetError(DatasetErrorKind::duplicate_id, "sample id '" + rec.sample_id + "' at " + where);
            try
            {
                const auto user = text::parse_integer(cols[1], "user_id");
                if (user < 0 || user >= max_users)
                    throw std::invalid_argument("user_id out of range");
                rec.user_id = static_cast<int>(user);
                rec.label = {text::parse_number(cols[2], "x_mm"), text::parse_number(cols[3], "y_mm"),
                             text::parse_number(cols[4], "z_mm")};
            }
            catch (const std::invalid_argument &e)
            {
                throw DatasetError(DatasetErrorKind::malformed_row, where + ": " + e.what());
            }
            if (!rec.label.is_finite())
                throw DatasetError(DatasetErrorKind::malformed_row, where + ": non-finite label");
            rec.file = base_dir / (rec.sample_id + ".bin");
            index.records.push_back(std::move(rec));
        }

        if (auto it = meta.find("topology"); it != meta.end())
        {
            index.topology = it->second;
            meta.erase(it);
        }
        std::map<std::string, std::string> radio_keys;
        for (const char *k : {"carrier_hz", "subcarrier_spacing_hz", "total_subcarriers", "pilot_count",
                              "interleave_factor", "tx_power_dbm", "rx_gain_db", "symbol_duration_s"})
            if (auto it = meta.find(k); it != meta.end())
                radio_keys.insert(*it);
        try
        {
            auto &r = index.radio;
            for (const auto &[k, v] : radio_keys)
            {
                if (k == "carrier_hz")
                    r.carrier_hz = text::parse_number(v, k);
                else if (k == "subcarrier_spacing_hz")
                    r.subcarrier_spacing_hz = text::parse_number(v, k);
                else if (k == "total_subcarriers")
                    r.total_subcarriers = static_cast<int>(text::parse_integer(v, k));
                else if (k == "pilot_count")
                    r.pilot_count = static_cast<int>(text::parse_integer(v, k));
                else if (k == "interleave_factor")
                    r.interleave_factor = static_cast<int>(text::parse_integer(v, k));
                else if (k == "tx_power_dbm")
                    r.tx_power_dbm = text::parse_number(v, k);
                else if (k == "rx_gain_db")
                    r.rx_gain_db = text::parse_number(v, k);
                else if (k == "symbol_duration_s")
                    r.symbol_duration_s = text::parse_number(v, k);
            }
            r.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw DatasetError(DatasetErrorKind::malformed_row, std::string("index preamble: ") + e.what());
        }
        return index;
    }

    DatasetIndex load_index(const fs::path &path, bool check_files)
    {
        std::string content;
        try
        {
            content = text::read_file(path);
        }
        catch (const std::runtime_error &)
        {
            throw DatasetError(DatasetErrorKind::missing_file, "index '" + path.string() + "'");
        }
        auto index = parse_index(content, path.parent_path());
        if (check_files)
            for (const auto &rec : index.records)
                if (!fs::is_regular_file(rec.file))
                    throw DatasetError(DatasetErrorKind::missing_file,
                                       "sample '" + rec.sample_id + "' -> '" + rec.file.string() + "'");
        return index;
    }

    void save_index(const fs::path &path, const DatasetIndex &index) { write_file_atomic(path, format_index(index)); }

    CsiSample load_record(const SampleRecord &record)
    {
        auto sample = decode_sample(read_binary_file(record.file));
        sample.label = record.label;
        sample.user_id = record.user_id;
        sample.sample_id = record.sample_id;
        return sample;
    }

    SampleStream::iterator::iterator(const DatasetIndex *index, std::size_t pos) : index_(index), pos_(pos)
    {
        load();
    }

    SampleStream::iterator &SampleStream::iterator::operator++()
    {
        ++pos_;
        load();
        return *this;
    }

    void SampleStream::iterator::load()
    {
        if (index_ == nullptr || pos_ >= index_->size())
        {
            item_ = {};
            return;
        }
        item_.record = &index_->records[pos_];
        item_.sample = load_record(*item_.record);
    }
}
