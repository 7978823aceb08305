#include <stdio.h>
#include "graphbrauer.h"

int main(void) {
    GbGraph *g = NULL;
    if (gb_graph_builtin("doubled-k4", &g) != GB_STATUS_OK) {
        fprintf(stderr, "%s\n", gb_last_error_message());
        return 1;
    }
    GbConfig config;
    gb_config_default(&config);
    GbReport *r = NULL;
    if (gb_analyze(g, &config, &r) != GB_STATUS_OK) {
        fprintf(stderr, "%s\n", gb_last_error_message());
        return 1;
    }
    GbInterval period;
    gb_report_period(r, &period);
    printf("period %llu %llu %d\n", (unsigned long long)period.lower,
           (unsigned long long)period.upper, (int)period.resolved);
    char *json = NULL;
    gb_report_to_json(r, &json);
    if (json == NULL) return 1;
    gb_string_free(json);
    gb_report_free(r);
    gb_graph_free(g);

    GbGraph *missing = NULL;
    printf("unknown %d\n", (int)gb_graph_builtin("nope", &missing));
    return 0;
}
