/*
 * Copyright (C) 2026 The loadcycle Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include <type_traits>

#include <doctest.h>

#include "loadcycle/operator_model.hpp"
#include "support.hpp"

using namespace loadcycle;

TEST_SUITE("firewall")
{
    TEST_CASE("header parser finds the declared fields")
    {
        const std::string sample = "struct SensedState {\n    double speed = 0.0;  // m/s\n"
                                   "    bool penetrating = false;\n};\n";
        const auto fields = testing::sensed_fields_from_header(sample);
        REQUIRE(fields.size() == 2);
        CHECK(fields[0] == "speed");
        CHECK(fields[1] == "penetrating");
    }

    TEST_CASE("SensedState exposes no converter, pump or pressure signal")
    {
        const auto problems = testing::firewall_violations();
        for (const auto& p : problems) {
            MESSAGE(p);
        }
        CHECK(problems.empty());
    }

    TEST_CASE("operator entry points take only cab-side types")
    {
        using Fill = decltype(&operator_model::fill_step);
        using Expected = std::pair<operator_model::OperatorCommand, operator_model::OperatorState> (*)(
            const operator_model::SensedState&, operator_model::OperatorState, const operator_model::OperatorParams&,
            double);
        CHECK(std::is_same_v<Fill, Expected>);

        using Phase = decltype(&operator_model::phase_step);
        using ExpectedPhase = std::pair<operator_model::OperatorCommand, operator_model::OperatorState> (*)(
            const operator_model::SensedState&, operator_model::OperatorState, const operator_model::OperatorParams&,
            const operator_model::TaskDescription&, double);
        CHECK(std::is_same_v<Phase, ExpectedPhase>);
    }
}
