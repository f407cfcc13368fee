// SPDX-License-Identifier: Apache-2.0
//
// mcvst: MIMO-OFDM contextual video transmission link simulator
// Copyright (C) 2026 The mcvst authors
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

/* The public header must compile and link as plain C. */

#include <stdio.h>
#include <string.h>

#include "mcvst/mcvst.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(void)
{
    mcvst_config* config = NULL;
    mcvst_buffer buf = {NULL, 0};
    size_t idx[8];
    size_t count = 0;
    double gains[3] = {2.0, 1.0, 0.5};
    double power[3];

    EXPECT(mcvst_config_default(&config) == MCVST_OK);
    EXPECT(mcvst_config_get(config, "mimo.n_tx", &buf) == MCVST_OK);
    EXPECT(buf.data != NULL && strcmp((const char*)buf.data, "8") == 0);
    mcvst_buffer_free(&buf);

    EXPECT(mcvst_config_set(config, "sampling.m_h", "7") == MCVST_ERR_INVALID_CONFIG);
    EXPECT(strstr(mcvst_last_error(), "sampling.m_h") != NULL);
    EXPECT(strcmp(mcvst_status_name(MCVST_ERR_INVALID_CONFIG), "invalid_config") == 0);

    EXPECT(mcvst_sampled_indices(64, 8, 3, idx, 8, &count) == MCVST_OK);
    EXPECT(count == 8 && idx[0] == 3 && idx[7] == 59);

    EXPECT(mcvst_waterfilling(gains, 3, 3.0, 0.1, power) == MCVST_OK);
    EXPECT(power[0] + power[1] + power[2] > 2.999999 && power[0] + power[1] + power[2] < 3.000001);
    EXPECT(mcvst_waterfilling(NULL, 3, 3.0, 0.1, power) == MCVST_ERR_INVALID_ARGUMENT);

    mcvst_config_free(config);
    if (failures == 0)
        printf("C interface: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
