from uuid import uuid4

from django.db import models


class BaseManager(models.Manager):
    def get_queryset(self):
        return super().get_queryset().filter(deleted=False)


class BaseUUIDModel(models.Model):
    """
    Integer primary key internally, UUID ``external_id`` for everything a user types or reads.

    Rows are never removed: ``delete`` flips the ``deleted`` flag and the default
    manager hides them. ``all_objects`` still sees every row.
    """

    external_id = models.UUIDField(default=uuid4, unique=True, db_index=True)
    created_date = models.DateTimeField(auto_now_add=True, null=True, blank=True)
    modified_date = models.DateTimeField(auto_now=True, null=True, blank=True)
    deleted = models.BooleanField(default=False)

    objects = BaseManager()
    all_objects = models.Manager()

    class Meta:
        abstract = True

    def delete(self, *args, **kwargs):
        self.deleted = True
        self.save(update_fields=["deleted", "modified_date"])
