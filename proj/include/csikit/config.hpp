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

#ifndef CSIKIT_CONFIG_HPP
#define CSIKIT_CONFIG_HPP

#include "csikit/grid.hpp"
#include "csikit/topology.hpp"
#include "csikit/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace csikit
{
    // Everything a pipeline run needs to know about the testbed, loadable from a
    // `key = value` file. Unknown keys are rejected.
    struct ToolkitConfig
    {
        RadioConfig radio;
        TopologyKind topology = TopologyKind::ura;
        TopologyParams topology_params;
        SiteLayout site;
        std::optional<std::filesystem::path> coordinates; // overrides the generated geometry
        double pattern_exponent = 0.0;
        double noise_power_dbm = -80.0; // per subcarrier, referred to the receiver input

        ArrayGeometry geometry() const;

        void apply(const std::map<std::string, std::string> &values);
    };

    ToolkitConfig load_config(const std::filesystem::path &path);
}

#endif
