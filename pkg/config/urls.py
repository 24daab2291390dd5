from django.conf import settings
from django.contrib import admin
from django.urls import path

urlpatterns = [
    # Django Admin, browse recorded runs
    path(settings.ADMIN_URL, admin.site.urls),
]
