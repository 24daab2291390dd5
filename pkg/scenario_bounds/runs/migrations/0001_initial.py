# Generated by Django 3.2.16 on 2022-11-21 10:02

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Run',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('external_id', models.UUIDField(db_index=True, default=uuid.uuid4, unique=True)),
                ('created_date', models.DateTimeField(auto_now_add=True, null=True)),
                ('modified_date', models.DateTimeField(auto_now=True, null=True)),
                ('deleted', models.BooleanField(default=False)),
                ('command', models.CharField(choices=[('epsilon', 'EPSILON'), ('bound', 'BOUND'), ('simulate', 'SIMULATE'), ('validate', 'VALIDATE')], max_length=16)),
                ('status', models.CharField(choices=[('succeeded', 'SUCCEEDED'), ('failed', 'FAILED')], default='succeeded', max_length=16)),
                ('input_digest', models.CharField(blank=True, default='', max_length=64)),
                ('seed', models.DecimalField(blank=True, decimal_places=0, max_digits=20, null=True)),
                ('manifest', models.JSONField(default=dict)),
                ('result', models.JSONField(default=dict)),
            ],
            options={
                'ordering': ('-created_date',),
            },
        ),
    ]
