from django.contrib import admin

from scenario_bounds.runs.models import Run


class RunAdmin(admin.ModelAdmin):
    list_display = ("external_id", "command", "status", "seed", "created_date")
    list_filter = ("command", "status")
    readonly_fields = ("external_id", "input_digest", "manifest", "result")
    search_fields = ("external_id", "input_digest")


admin.site.register(Run, RunAdmin)
