// Copyright 2026 The vlmfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef VLMFUZZ_TESTS_TEST_UTIL_H_
#define VLMFUZZ_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/catalog.h"
#include "vlmfuzz/explorer.h"
#include "vlmfuzz/recording_device.h"
#include "vlmfuzz/report.h"
#include "vlmfuzz/sim_app.h"
#include "vlmfuzz/vlm.h"

namespace vlmfuzz::testing {

inline std::filesystem::path TestData(std::string_view name) {
  return std::filesystem::path(VLMFUZZ_TEST_DATA) / name;
}

inline SimAppSpec Fixture(std::string_view name) {
  return LoadSimAppSpecFile(TestData(name));
}

// Device, explorer and optional mock bundled so the references stay valid.
struct SimRun {
  std::unique_ptr<SimDevice> device;
  std::unique_ptr<MockVlmClient> vlm;
  std::unique_ptr<Explorer> explorer;
  RunResult result;

  SimRun(const SimAppSpec& spec, ExplorerConfig config,
         const std::string& vlm_script = "",
         const BroadcastCatalog* catalog = nullptr) {
    device = std::make_unique<SimDevice>(spec);
    if (!vlm_script.empty()) {
      vlm = std::make_unique<MockVlmClient>(
          MockVlmClient::FromFile(TestData(vlm_script).string()));
      config.vlm_enabled = true;
    }
    explorer = std::make_unique<Explorer>(*device, ManifestFromSimSpec(spec),
                                          config, vlm.get(), catalog);
  }

  const RunResult& Run() {
    result = explorer->Run();
    return result;
  }
  const std::vector<EventRecord>& events() const {
    return explorer->recorder().events();
  }
};

inline ExplorerConfig QuickConfig(uint64_t seed, int64_t budget = 600) {
  ExplorerConfig c;
  c.rng_seed = seed;
  c.total_budget_seconds = budget;
  c.idle_wait_ms = 200;
  return c;
}

}  // namespace vlmfuzz::testing

#endif  // VLMFUZZ_TESTS_TEST_UTIL_H_
