// Copyright 2026 The spinmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <stdio.h>
#include <string.h>

#include "spinmech/spinmech.h"

int main(void) {
    spinmech_config* cfg = NULL;
    double* v = NULL;
    size_t n = 0;
    if (strcmp(spinmech_version(), "0.1.0") != 0) return 1;
    if (spinmech_config_parse("a = 1\n", &cfg) != SPINMECH_OK) return 1;
    spinmech_config_free(cfg);
    if (spinmech_parse_grid("0:1:3", &v, &n) != SPINMECH_OK || n != 3) return 1;
    spinmech_values_free(v);
    printf("%s\n", spinmech_status_name(SPINMECH_ERR_TRUNCATION));
    return 0;
}
